#include "support/helpers.hpp"

#include "ctxgen/parser.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ctxgen;
using oracle::Truth;

namespace {

class PredText {
 public:
  explicit PredText(std::uint64_t seed) : rng_(seed) {}

  std::string pred(int depth) {
    if (depth == 0 || pick(3) == 0) return atom();
    switch (pick(4)) {
      case 0: return "(" + pred(depth - 1) + " && " + pred(depth - 1) + ")";
      case 1: return "(" + pred(depth - 1) + " || " + pred(depth - 1) + ")";
      case 2: return "!" + pred(depth - 1);
      default: return "(" + pred(depth - 1) + " || " + pred(depth - 1) + ") && " + atom();
    }
  }

 private:
  int pick(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }
  std::string var() { return std::string(1, "abc"[pick(3)]); }
  std::string term() {
    switch (pick(4)) {
      case 0: return std::to_string(pick(5) - 2);
      case 1: return var() + " + " + std::to_string(pick(3));
      default: return var();
    }
  }
  std::string atom() {
    static const char* ops[] = {"==", "!=", "<", "<=", ">", ">="};
    if (pick(8) == 0) return "(" + var() + " % 2 == 0)";
    return "(" + term() + " " + ops[pick(6)] + " " + term() + ")";
  }

  std::mt19937_64 rng_;
};

PredPtr clause_pred(const ConjunctiveClause& c) {
  std::vector<PredPtr> ks;
  for (const auto& l : c) ks.push_back(l.positive ? l.atom : make_not(l.atom));
  return ks.empty() ? make_bool(true) : make_and(ks);
}

PredPtr dnf_pred(const std::vector<ConjunctiveClause>& cs) {
  std::vector<PredPtr> ks;
  for (const auto& c : cs) ks.push_back(clause_pred(c));
  return ks.empty() ? make_bool(false) : make_or(ks);
}

}  // namespace

TEST(Normalize, StrictComparisonsBecomeNonStrict) {
  auto a = analyze(testkit::spec("a < b && !(b >= c)"), TargetConfig::defaults());
  ASSERT_EQ(a.clauses.size(), 1u);
  ASSERT_EQ(a.clauses[0].size(), 2u);
  EXPECT_EQ(render(a.clauses[0][0]), "a + 1 <= b");
  EXPECT_EQ(render(a.clauses[0][1]), "b + 1 <= c");
}

TEST(Normalize, IntegerDisequalitySplits) {
  auto a = analyze(testkit::spec("a != 3"), TargetConfig::defaults());
  ASSERT_EQ(a.clauses.size(), 2u);
  EXPECT_EQ(render(a.clauses[0][0]), "a <= 2");
  EXPECT_EQ(render(a.clauses[1][0]), "a >= 4");
}

TEST(Normalize, TooManyDisjuncts) {
  std::string pre;
  for (int i = 0; i < 7; ++i) pre += std::string(i ? " && " : "") + "(a == " + std::to_string(i) + " || b == " + std::to_string(i) + ")";
  try {
    analyze(testkit::spec(pre), TargetConfig::defaults(), 64);
    FAIL() << "no resource error";
  } catch (const FrontendError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Resource);
  }
  EXPECT_NO_THROW(analyze(testkit::spec(pre), TargetConfig::defaults(), 128));
}

TEST(Normalize, ClauseOrder) {
  auto a = analyze(testkit::spec("!\\valid(p) && p != q && a == 1", "void f(int a, int *p, int *q);"),
                   TargetConfig::defaults());
  ASSERT_EQ(a.clauses.size(), 1u);
  const auto& c = a.clauses[0];
  ASSERT_EQ(c.size(), 3u);
  EXPECT_TRUE(c[0].positive);
  EXPECT_TRUE(!c[1].positive && c[1].is_pointer_cmp());
  EXPECT_TRUE(!c[2].positive && c[2].is_defined());
}

TEST(Normalize, TermFolding) {
  auto a = analyze(testkit::spec("\\valid(p + 1 + (0 .. 2)) && *(p + 0) == 2 + 3", "void f(int *p);"),
                   TargetConfig::defaults());
  ASSERT_EQ(a.clauses.size(), 1u);
  EXPECT_EQ(render(a.clauses[0][0]), "\\valid(p + (1 .. 3))");
  EXPECT_EQ(render(a.clauses[0][1]), "*p == 5");
}

// The DNF has the truth table of the source predicate over a small grid.
TEST(Normalize, DnfTruthTableEquivalence) {
  PredText gen(17);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    std::string pre = gen.pred(3);
    Analysis a;
    try {
      a = analyze(testkit::spec(pre), TargetConfig::defaults(), 4096);
    } catch (const FrontendError& e) {
      ASSERT_EQ(e.kind(), ErrorKind::Resource) << pre << ": " << e.what();
      continue;
    }
    PredPtr dnf = dnf_pred(a.clauses);
    for (long x = -2; x <= 2; ++x)
      for (long y = -2; y <= 2; ++y)
        for (long z = -2; z <= 2; ++z) {
          auto s = testkit::int_args({x, y, z});
          Truth want = oracle::eval_pred(a.typed.precondition, s, a.typed);
          Truth got = oracle::eval_pred(dnf, s, a.typed);
          ASSERT_EQ(want, got) << pre << " at a=" << x << " b=" << y << " c=" << z;
          ++checked;
        }
  }
  EXPECT_GT(checked, 20000);
}

TEST(Normalize, Idempotence) {
  PredText gen(18);
  for (int i = 0; i < 300; ++i) {
    auto a = analyze(testkit::spec(gen.pred(2)), TargetConfig::defaults(), 4096);
    PredPtr once = a.normalized;
    EXPECT_TRUE(same_pred(*normalize_terms(once), *once)) << render(once);
    PredPtr d = dnf_pred(a.clauses);
    auto again = to_dnf(d, 4096);
    ASSERT_EQ(again.size(), a.clauses.size()) << render(d);
    for (std::size_t k = 0; k < again.size(); ++k) EXPECT_TRUE(same_pred(*clause_pred(again[k]), *clause_pred(a.clauses[k])));
  }
}
