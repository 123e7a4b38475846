#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace ctxgen::testkit {

/// Random well-typed inputs over one fixed prototype:
///   int g;
///   int f(int a, int b, unsigned int n, int *p, int *q, unsigned char *buf);
/// Each precondition is a conjunction of 1..5 literals, occasionally with a
/// two-way disjunction, mixing integer comparisons, definedness of displaced
/// ranges, pointer (dis)equalities and negated definedness.
class SpecFuzzer {
 public:
  explicit SpecFuzzer(std::uint64_t seed) : rng_(seed) {}

  std::string next();
  std::string literal();

 private:
  int pick(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }
  std::string scalar();
  std::string term();
  std::string memory();
  std::string pointer();

  std::mt19937_64 rng_;
};

}  // namespace ctxgen::testkit
