#include "support/symgen.hpp"

#include <gtest/gtest.h>

using namespace ctxgen;
using sym::Expr;

namespace {

using Conc = std::optional<ConcreteInterval>;

std::optional<Conc> conc(const SymRange& r, const sym::Valuation& v) {
  try {
    return concretize(r, v);
  } catch (const sym::EvalError&) {
    return std::nullopt;
  }
}

bool same_conc(const Conc& a, const Conc& b) {
  if (!a || !b) return !a && !b;
  return a->lo == b->lo && a->hi == b->hi;
}

/// a within b as sets of integers.
bool within(const Conc& a, const Conc& b) {
  if (!a) return true;
  if (!b) return false;
  return b->lo <= a->lo && a->hi <= b->hi;
}

Conc intersect(const Conc& a, const Conc& b) {
  if (!a || !b) return std::nullopt;
  ConcreteInterval r{a->lo <= b->lo ? b->lo : a->lo, a->hi <= b->hi ? a->hi : b->hi};
  if (!(r.lo <= r.hi)) return std::nullopt;
  return r;
}

bool bounds_decided(const SymRange& a, const SymRange& b) {
  if (a.is_empty() || b.is_empty()) return true;
  return sym::compare(a.lo(), b.lo()) != sym::CmpResult::UNKNOWN &&
         sym::compare(a.hi(), b.hi()) != sym::CmpResult::UNKNOWN;
}

// Simplified bounds; a provably empty range is EMPTY.
SymRange simp(const SymRange& r) {
  if (r.is_empty()) return r;
  SymRange s = SymRange::of(sym::simplify(r.lo()), sym::simplify(r.hi()));
  return proves_empty(s) ? SymRange::empty() : s;
}

std::string show(const SymRange& r) { return r.render(); }

}  // namespace

TEST(Ranges, IvalShapes) {
  EXPECT_EQ(ival(CmpOp::Eq, sym::constant(14)).render(), "[14; 14]");
  EXPECT_EQ(ival(CmpOp::Le, sym::constant(16672)).render(), "[-oo; 16672]");
  Expr x = sym::var(LValue(make_var("x", {}, CType::integer("int"))));
  SymRange r = ival(CmpOp::Ge, sym::add(x, sym::constant(1)));
  EXPECT_TRUE(r.hi()->kind == sym::Node::Kind::PosInf);
  EXPECT_EQ(sym::render(r.lo()), "x + 1");
  EXPECT_THROW(ival(CmpOp::Lt, x), std::invalid_argument);
}

TEST(Ranges, Neutral) {
  EXPECT_TRUE(neutral(*CType::integer("int")).is_top());
  EXPECT_TRUE(neutral(*CType::pointer(CType::integer("int"))).is_empty());
  EXPECT_THROW(neutral(*CType::array(CType::integer("int"), 4)), std::invalid_argument);
}

TEST(Ranges, DecidedMeetAndJoin) {
  SymRange a = SymRange::of(sym::constant(16), sym::constant(100)), b = SymRange::of(sym::neg_inf(), sym::constant(16672));
  EXPECT_EQ(meet(a, b).render(), "[16; 100]");
  EXPECT_EQ(join(a, b).render(), "[-oo; 16672]");
  EXPECT_TRUE(meet(SymRange::of(sym::constant(5), sym::constant(9)), SymRange::of(sym::constant(0), sym::constant(4))).is_empty());
  EXPECT_EQ(leq(a, b), Tri::TRUE);
  EXPECT_EQ(leq(b, a), Tri::FALSE);
}

TEST(Ranges, LatticeLawsStructural) {
  testkit::SymGen g(31);
  int decided = 0;
  for (int i = 0; i < 10000; ++i) {
    SymRange a = simp(g.range()), b = simp(g.range()), c = simp(g.range());
    EXPECT_TRUE(same_range(join(a, a), a)) << show(a);
    EXPECT_TRUE(same_range(meet(a, a), a)) << show(a);
    EXPECT_TRUE(same_range(join(a, SymRange::empty()), a)) << show(a);
    EXPECT_TRUE(meet(a, SymRange::empty()).is_empty()) << show(a);
    if (!bounds_decided(a, b)) continue;
    ++decided;
    EXPECT_TRUE(same_range(join(a, b), join(b, a))) << show(a) << " " << show(b);
    EXPECT_TRUE(same_range(meet(a, b), meet(b, a))) << show(a) << " " << show(b);
    EXPECT_TRUE(same_range(join(a, meet(a, b)), a)) << show(a) << " " << show(b);
    if (bounds_decided(b, c) && bounds_decided(a, c)) {
      EXPECT_TRUE(same_range(join(join(a, b), c), join(a, join(b, c)))) << show(a) << show(b) << show(c);
      EXPECT_TRUE(same_range(meet(meet(a, b), c), meet(a, meet(b, c)))) << show(a) << show(b) << show(c);
    }
  }
  EXPECT_GT(decided, 1000);
}

TEST(Ranges, LatticeLawsConcrete) {
  testkit::SymGen g(32);
  for (int i = 0; i < 10000; ++i) {
    SymRange a = g.range(), b = g.range(), c = g.range();
    sym::Valuation v = g.valuation();
    auto ca = conc(a, v), cb = conc(b, v), cc = conc(c, v);
    if (!ca || !cb || !cc) continue;
    auto eq = [&](const SymRange& l, const SymRange& r) {
      auto x = conc(l, v), y = conc(r, v);
      return x && y && same_conc(*x, *y);
    };
    ASSERT_TRUE(eq(join(a, b), join(b, a))) << show(a) << " " << show(b);
    ASSERT_TRUE(eq(meet(a, b), meet(b, a))) << show(a) << " " << show(b);
    ASSERT_TRUE(eq(join(join(a, b), c), join(a, join(b, c))));
    ASSERT_TRUE(eq(meet(meet(a, b), c), meet(a, meet(b, c))));
    ASSERT_TRUE(eq(join(a, a), a) && eq(meet(a, a), a)) << show(a);
    ASSERT_TRUE(eq(join(a, SymRange::empty()), a));
    ASSERT_FALSE(*conc(meet(a, SymRange::empty()), v));
    // Absorption holds when a is concretely non-empty.
    if (*ca) {
      ASSERT_TRUE(eq(join(a, meet(a, b)), a)) << show(a) << " " << show(b);
      ASSERT_TRUE(eq(meet(a, join(a, b)), a)) << show(a) << " " << show(b);
    }
  }
}

TEST(Ranges, ConcretizationHomomorphism) {
  testkit::SymGen g(33);
  for (int i = 0; i < 10000; ++i) {
    SymRange a = g.range(), b = g.range();
    sym::Valuation v = g.valuation();
    auto ca = conc(a, v), cb = conc(b, v), cj = conc(join(a, b), v), cm = conc(meet(a, b), v);
    if (!ca || !cb) continue;
    ASSERT_TRUE(cj && cm);
    ASSERT_TRUE(within(*ca, *cj) && within(*cb, *cj)) << show(a) << " " << show(b);
    ASSERT_TRUE(same_conc(*cm, intersect(*ca, *cb))) << show(a) << " " << show(b);
  }
}

TEST(Ranges, LeqSoundAndBounds) {
  testkit::SymGen g(34);
  int decided = 0;
  for (int i = 0; i < 10000; ++i) {
    SymRange a = g.range(), b = g.range();
    Tri t = leq(a, b);
    EXPECT_NE(leq(a, join(a, b)), Tri::FALSE) << show(a) << " " << show(b);
    EXPECT_NE(leq(meet(a, b), a), Tri::FALSE) << show(a) << " " << show(b);
    if (t == Tri::UNKNOWN) continue;
    ++decided;
    sym::Valuation v = g.valuation();
    auto ca = conc(a, v), cb = conc(b, v);
    if (!ca || !cb) continue;
    if (t == Tri::TRUE) EXPECT_TRUE(within(*ca, *cb)) << show(a) << " " << show(b);
    if (t == Tri::FALSE) EXPECT_FALSE(within(*ca, *cb)) << show(a) << " " << show(b);
  }
  EXPECT_GT(decided, 1000);
}

TEST(Ranges, SmallExamples) {
  auto k = [](long v) { return sym::constant(v); };
  EXPECT_EQ(join(SymRange::of(k(0), k(2)), SymRange::of(k(5), k(9))).render(), "[0; 9]");
  Expr t2 = sym::var(LValue(make_var("t", {}, CType::integer("int"))));
  EXPECT_TRUE(same_range(join(SymRange::empty(), SymRange::of(k(0), t2)), SymRange::of(k(0), t2)));
  EXPECT_TRUE(meet(SymRange::of(k(0), k(5)), SymRange::of(k(10), k(12))).is_empty());
  EXPECT_EQ(meet(SymRange::top(), SymRange::of(k(16), k(16672))).render(), "[16; 16672]");
  EXPECT_EQ(leq(SymRange::point(k(16)), SymRange::of(k(16), k(16672))), Tri::TRUE);

  Expr a = sym::var(LValue(make_var("a", {}, CType::integer("int"))));
  Expr b = sym::var(LValue(make_var("b", {}, CType::integer("int"))));
  SymRange j = join(SymRange::of(k(0), a), SymRange::of(k(0), b));
  EXPECT_EQ(sym::render(j.lo()), "0");
  SymRange m = meet(SymRange::of(a, sym::pos_inf()), SymRange::of(sym::neg_inf(), b));
  EXPECT_EQ(m.render(), "[a; b]");
  EXPECT_EQ(leq(SymRange::of(k(0), a), SymRange::of(k(0), b)), Tri::UNKNOWN);
  Expr len = sym::var(LValue(make_var("length", {}, CType::integer("int"))));
  SymRange in = SymRange::of(k(0), sym::sub(len, k(1)));
  EXPECT_EQ(leq(in, in), Tri::TRUE);
  // [0; max(a, b)] under every valuation
  for (long va = -3; va <= 3; ++va)
    for (long vb = -3; vb <= 3; ++vb) {
      sym::Valuation v;
      v.vars["a"] = va;
      v.vars["b"] = vb;
      auto c = concretize(j, v);
      long hi = std::max(va, vb);
      if (hi < 0) {
        EXPECT_FALSE(c);
        continue;
      }
      ASSERT_TRUE(c);
      EXPECT_EQ(c->lo, sym::ExtInt::finite(0));
      EXPECT_EQ(c->hi, sym::ExtInt::finite(hi));
    }
}
