#include "ctxgen/constraints.hpp"

#include <gtest/gtest.h>

using namespace ctxgen;

namespace {

LValue lv(const char* name, CTypePtr t = CType::integer("int")) { return LValue(make_var(name, {}, t)); }

}  // namespace

TEST(DepGraph, RejectsTwoCycle) {
  DepGraph g;
  LValue a = lv("a"), b = lv("b");
  g.add_dependency(a, {b});
  EXPECT_TRUE(g.has_edge(a, b));
  EXPECT_TRUE(g.reaches(a, b));
  try {
    g.add_dependency(b, {a});
    FAIL() << "cycle accepted";
  } catch (const CycleError& e) {
    ASSERT_EQ(e.path.size(), 3u);
    EXPECT_EQ(e.path.front(), e.path.back());
  }
  EXPECT_FALSE(g.has_edge(b, a));
}

TEST(DepGraph, RejectsSelfEdge) {
  DepGraph g;
  LValue a = lv("a");
  EXPECT_THROW(g.add_dependency(a, {a}), CycleError);
  EXPECT_TRUE(g.edges().empty());
}

TEST(DepGraph, AllOrNothing) {
  DepGraph g;
  LValue a = lv("a"), b = lv("b"), c = lv("c");
  g.add_dependency(c, {a});
  EXPECT_THROW(g.add_dependency(a, {b, c}), CycleError);
  EXPECT_FALSE(g.has_edge(a, b));
  DepGraph h = g.with_dependency(a, {b});
  EXPECT_TRUE(h.has_edge(a, b));
  EXPECT_FALSE(g.has_edge(a, b));
  EXPECT_EQ(h.deps(a).size(), 1u);
  EXPECT_NE(h.to_dot().find("->"), std::string::npos);
}

TEST(DepGraph, LongCyclePath) {
  DepGraph g;
  std::vector<LValue> xs;
  for (int i = 0; i < 10; ++i) xs.push_back(lv(("p" + std::to_string(i)).c_str()));
  for (int i = 0; i + 1 < 10; ++i) g.add_dependency(xs[i], {xs[i + 1]});
  try {
    g.add_dependency(xs[9], {xs[0]});
    FAIL();
  } catch (const CycleError& e) {
    EXPECT_EQ(e.path.size(), 11u);
  }
}

TEST(Sigma, FunctionalUpdateAndDigest) {
  SigmaMap s;
  LValue x = lv("x");
  StateConstraint c = StateConstraint::fresh(CType::integer("int"));
  EXPECT_TRUE(c.range.is_top());
  SigmaMap t = s.updated(x, c);
  EXPECT_FALSE(s.contains(x));
  EXPECT_TRUE(t.contains(x));
  EXPECT_NE(s.digest(), t.digest());
  c.range = SymRange::of(sym::constant(16), sym::constant(16672));
  EXPECT_TRUE(c.add_check(RuntimeCheck::of(CmpOp::Eq, sym::binary(BinOp::Mod, sym::var(x), sym::constant(16)), sym::constant(0))));
  EXPECT_FALSE(c.add_check(RuntimeCheck::of(CmpOp::Eq, sym::binary(BinOp::Mod, sym::var(x), sym::constant(16)), sym::constant(0))));
  t.set(x, c);
  EXPECT_EQ(t.dump(), "x : int = [16; 16672] ⊕ {RTC(x % 16 == 0)} kinds={}\n");
}

TEST(Sigma, PointerStartsEmpty) {
  StateConstraint c = StateConstraint::fresh(CType::pointer(CType::integer("char")));
  EXPECT_TRUE(c.range.is_empty());
  EXPECT_TRUE(c.init.is_empty());
  EXPECT_FALSE(alias_of(c));
  EXPECT_THROW(alias_of(StateConstraint::fresh(CType::integer("int"))), std::invalid_argument);
}

TEST(Sigma, AliasView) {
  auto pty = CType::pointer(CType::integer("int"));
  LValue q = lv("q", pty);
  StateConstraint c = StateConstraint::fresh(pty);
  sym::Expr m = sym::add(sym::var(q), sym::constant(2));
  c.range = SymRange::point(m);
  auto a = alias_of(c);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->base.key(), "q");
  EXPECT_EQ(sym::render(a->offset), "2");
}

TEST(RuntimeChecks, HoldsAndSymbols) {
  LValue x = lv("x"), y = lv("y");
  RuntimeCheck c{{CheckAtom{CmpOp::Le, sym::var(x), sym::var(y)}, CheckAtom{CmpOp::Eq, sym::var(x), sym::constant(7)}}};
  EXPECT_EQ(render(c), "RTC(x <= y || x == 7)");
  EXPECT_EQ(c.symbols().size(), 2u);
  sym::Valuation v;
  v.vars["x"] = 7;
  v.vars["y"] = 0;
  EXPECT_TRUE(holds(c, v));
  v.vars["x"] = 8;
  EXPECT_FALSE(holds(c, v));
  v.vars.erase("y");
  EXPECT_THROW(holds(c, v), sym::EvalError);
}

TEST(Decompose, BaseAndOffset) {
  auto pty = CType::pointer(CType::integer("int"));
  TermPtr p = make_var("p", {}, pty);
  TermPtr i = make_const(3, {}, CType::logic_integer());
  TermPtr d = make_disp(p, i, i, {}, pty);
  EXPECT_EQ(tbase(d).key(), "p");
  EXPECT_EQ(render(*toffset(d)), "3");
  TermPtr wide = make_disp(p, make_const(0, {}, CType::logic_integer()), i, {}, pty);
  EXPECT_THROW(tbase(wide), std::invalid_argument);
}
