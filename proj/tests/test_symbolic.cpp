#include "support/symgen.hpp"

#include <gtest/gtest.h>

using namespace ctxgen;
using sym::CmpResult;
using sym::Expr;

namespace {

Expr int_var(const char* name) { return sym::var(LValue(make_var(name, {}, CType::integer("int")))); }

sym::ExtInt fin(long v) { return sym::ExtInt::finite(Int(v)); }

std::optional<sym::ExtInt> try_valuate(const Expr& e, const sym::Valuation& v) {
  try {
    return sym::valuate(e, v);
  } catch (const sym::EvalError&) {
    return std::nullopt;
  }
}

}  // namespace

TEST(Symbolic, SimplifyExamples) {
  Expr x = int_var("x");
  EXPECT_TRUE(sym::same(sym::simplify(sym::min(x, sym::add(x, sym::constant(1)))), x));
  Expr five = sym::simplify(sym::max(sym::constant(3), sym::constant(5)));
  ASSERT_TRUE(five->is_const());
  EXPECT_EQ(five->value, 5);
}

TEST(Symbolic, MinOfLengthMinusOne) {
  Expr len = int_var("length");
  Expr lm1 = sym::sub(len, sym::constant(1));
  Expr s = sym::simplify(sym::min(lm1, len));
  EXPECT_EQ(sym::render(s), sym::render(sym::simplify(lm1)));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    sym::Valuation v;
    v.vars[len->lv.key()] = Int(static_cast<long>(rng() % 200001) - 100000);
    EXPECT_EQ(sym::valuate(s, v), sym::valuate(sym::min(lm1, len), v));
  }
}

TEST(Symbolic, CDivisionAndErrors) {
  sym::Valuation v;
  EXPECT_EQ(sym::valuate(sym::binary(BinOp::Div, sym::constant(-7), sym::constant(2)), v), fin(-3));
  EXPECT_EQ(sym::valuate(sym::binary(BinOp::Mod, sym::constant(-7), sym::constant(2)), v), fin(-1));
  EXPECT_THROW(sym::valuate(sym::binary(BinOp::Div, sym::constant(1), sym::constant(0)), v), sym::EvalError);
  EXPECT_THROW(sym::valuate(int_var("q"), v), sym::EvalError);
  EXPECT_THROW(sym::valuate(sym::binary(BinOp::Add, sym::neg_inf(), sym::pos_inf()), v), sym::EvalError);
  EXPECT_EQ(sym::valuate(sym::binary(BinOp::Add, sym::pos_inf(), sym::constant(3)), v), sym::ExtInt::pos_inf());
  EXPECT_EQ(sym::compare(sym::binary(BinOp::Add, sym::neg_inf(), sym::pos_inf()), sym::constant(0)), CmpResult::UNKNOWN);
}

TEST(Symbolic, CompareBasics) {
  Expr x = int_var("x"), y = int_var("y");
  EXPECT_EQ(sym::compare(x, sym::add(x, sym::constant(2))), CmpResult::LE);
  EXPECT_EQ(sym::compare(sym::add(x, sym::constant(2)), x), CmpResult::GE);
  EXPECT_EQ(sym::compare(sym::add(x, y), sym::add(y, x)), CmpResult::EQ);
  EXPECT_EQ(sym::compare(x, y), CmpResult::UNKNOWN);
  EXPECT_EQ(sym::compare(sym::neg_inf(), x), CmpResult::LE);
  EXPECT_EQ(sym::compare(sym::min(x, y), x), CmpResult::LE);
  sym::Bounds b;
  b.by_key[x->lv.key()] = sym::Interval{Int(0), Int(4)};
  EXPECT_EQ(sym::compare(x, sym::constant(4), &b), CmpResult::LE);
  EXPECT_EQ(sym::compare(x, sym::constant(3), &b), CmpResult::UNKNOWN);
}

// compare must never contradict a concrete valuation.
TEST(Symbolic, CompareSoundnessFuzz) {
  testkit::SymGen g(2024);
  int decided = 0, contradictions = 0;
  for (int i = 0; i < 10000; ++i) {
    Expr e1 = g.expr();
    Expr e2;
    switch (g.pick(3)) {
      case 0: e2 = g.expr(); break;
      case 1: e2 = sym::add(e1, sym::constant(g.small(-2, 2))); break;
      default: e2 = g.pick(2) ? sym::min(e1, g.expr(1)) : sym::max(e1, g.expr(1)); break;
    }
    CmpResult r = sym::compare(e1, e2);
    if (r == CmpResult::UNKNOWN) continue;
    ++decided;
    sym::Valuation v = g.valuation();
    auto a = try_valuate(e1, v), b = try_valuate(e2, v);
    if (!a || !b) continue;
    bool ok = (r == CmpResult::LE && *a <= *b) || (r == CmpResult::GE && *b <= *a) || (r == CmpResult::EQ && *a == *b);
    if (!ok) {
      ++contradictions;
      ADD_FAILURE() << sym::render(e1) << " vs " << sym::render(e2) << ": " << sym::spelling(r) << " but "
                    << sym::to_string(*a) << ", " << sym::to_string(*b);
    }
  }
  EXPECT_EQ(contradictions, 0);
  EXPECT_GT(decided, 3000);
}

TEST(Symbolic, SimplifyPreservesValuation) {
  testkit::SymGen g(99);
  for (int i = 0; i < 10000; ++i) {
    Expr e = g.expr(4);
    Expr s = sym::simplify(e);
    for (int k = 0; k < 3; ++k) {
      sym::Valuation v = g.valuation();
      auto a = try_valuate(e, v);
      if (!a) continue;
      auto b = try_valuate(s, v);
      ASSERT_TRUE(b) << sym::render(e) << " -> " << sym::render(s);
      ASSERT_EQ(*a, *b) << sym::render(e) << " -> " << sym::render(s);
    }
  }
}

TEST(Symbolic, Reflexivity) {
  testkit::SymGen g(5);
  for (int i = 0; i < 2000; ++i) {
    Expr e = sym::simplify(g.expr());
    EXPECT_EQ(sym::compare(e, e), CmpResult::EQ) << sym::render(e);
  }
}

// A chain decided LE twice is LE end to end under every valuation.
TEST(Symbolic, TransitivityOnDecidedChains) {
  testkit::SymGen g(11);
  int chains = 0;
  for (int i = 0; i < 10000; ++i) {
    Expr a = g.expr(2);
    Expr b = sym::add(sym::max(a, g.expr(1)), sym::constant(g.small(0, 2)));
    Expr c = sym::max(b, g.expr(1));
    if (sym::compare(a, b) != CmpResult::LE || sym::compare(b, c) != CmpResult::LE) continue;
    ++chains;
    sym::Valuation v = g.valuation();
    auto va = try_valuate(a, v), vc = try_valuate(c, v);
    if (va && vc) EXPECT_TRUE(*va <= *vc);
    CmpResult ac = sym::compare(a, c);
    EXPECT_TRUE(ac == CmpResult::LE || ac == CmpResult::EQ || ac == CmpResult::UNKNOWN) << sym::render(a) << " / " << sym::render(c);
  }
  EXPECT_GT(chains, 1000);
}

TEST(Symbolic, SplitPointer) {
  auto pty = CType::pointer(CType::integer("int"));
  Expr p = sym::var(LValue(make_var("p", {}, pty)));
  Expr x = int_var("x");
  auto s = sym::split_pointer(sym::add(p, sym::add(x, sym::constant(1))));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->first.key(), p->lv.key());
  EXPECT_EQ(sym::render(sym::simplify(s->second)), sym::render(sym::simplify(sym::add(x, sym::constant(1)))));
  EXPECT_FALSE(sym::split_pointer(x));
}

TEST(Symbolic, ValuationExamples) {
  Expr x = int_var("x"), y = int_var("y");
  sym::Valuation v;
  EXPECT_EQ(sym::valuate(sym::min(sym::constant(0), sym::constant(0)), v), fin(0));
  v.vars[x->lv.key()] = 4;
  EXPECT_EQ(sym::valuate(sym::add(x, sym::constant(3)), v), fin(7));
  v.vars[x->lv.key()] = 2;
  v.vars[y->lv.key()] = 5;
  EXPECT_EQ(sym::valuate(sym::binary(BinOp::Sub, sym::max(x, y), sym::min(x, y)), v), fin(3));
  EXPECT_EQ(sym::compare(sym::constant(0), sym::min(sym::constant(0), sym::constant(0))), CmpResult::EQ);
}
