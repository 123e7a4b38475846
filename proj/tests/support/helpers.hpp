#pragma once

#include "ctxgen/codegen.hpp"
#include "ctxgen/oracle.hpp"
#include "ctxgen/pipeline.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace ctxgen::testkit {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Analysis plus the driver for the clauses that succeeded (if any).
struct Built {
  Analysis a;
  std::vector<const InferenceResult*> ok;
  std::optional<ir::Program> prog;

  const InferenceResult& result(std::size_t i = 0) const { return a.results.at(i); }
};

inline Built build(const std::string& text, const TargetConfig& cfg = TargetConfig::defaults()) {
  Built b;
  b.a = analyze(text, cfg);
  for (const auto& r : b.a.results)
    if (r.ok()) b.ok.push_back(&r);
  if (!b.ok.empty()) b.prog = generate(b.a.typed, b.ok);
  return b;
}

/// `/*@ requires PRE; */ PROTO` with a default prototype over three ints.
inline std::string spec(const std::string& pre, const std::string& proto = "void f(int a, int b, int c);") {
  return "/*@ requires " + pre + "; */\n" + proto + "\n";
}

/// Call state with integer arguments only.
inline oracle::ConcreteState int_args(const std::vector<long>& xs) {
  oracle::ConcreteState s;
  for (long x : xs) s.args.push_back(oracle::Value::integer(Int(x)));
  return s;
}

inline const StateConstraint* sigma_of(const InferenceResult& r, const std::string& key) {
  for (const auto& [l, c] : r.sigma.entries())
    if (l.key() == key) return &c;
  return nullptr;
}

}  // namespace ctxgen::testkit
