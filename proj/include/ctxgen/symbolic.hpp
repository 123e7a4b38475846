#pragma once

#include "ctxgen/ast.hpp"
#include "ctxgen/bigint.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctxgen::sym {

struct Node;
using Expr = std::shared_ptr<const Node>;

/// Symbolic expression over left-value symbols.
///   Const, Var(lv), Deref(inner, lv), Binary(op, l, r), Min(l, r), Max(l, r), NegInf, PosInf
/// A Deref node is the dereference marker applied to the symbolic address
/// `inner`; `lv` is the left-value it denotes (its key names the node).
struct Node {
  enum class Kind { Const, Var, Deref, Binary, Min, Max, NegInf, PosInf };

  Kind kind = Kind::Const;
  Int value;
  LValue lv;
  BinOp op = BinOp::Add;
  std::vector<Expr> kids;

  bool is_const() const { return kind == Kind::Const; }
  bool is_inf() const { return kind == Kind::NegInf || kind == Kind::PosInf; }
  bool is_minmax() const { return kind == Kind::Min || kind == Kind::Max; }
};

Expr constant(const Int& v);
Expr var(const LValue& lv);
Expr deref(Expr inner, const LValue& lv);
Expr binary(BinOp op, Expr l, Expr r);
Expr min(Expr a, Expr b);
Expr max(Expr a, Expr b);
Expr neg_inf();
Expr pos_inf();

/// Folding constructors: constant children are folded, x+0 / x*1 dropped.
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);

/// Image of a typed integer term (or pointer memory value). Left-values
/// become Var, dereferences become Deref over the address, displacements +.
Expr from_term(const TermPtr& t);

/// Infix rendering with `min(a, b)` / `max(a, b)` calls; `-oo` / `+oo`.
std::string render(const Expr& e);
bool same(const Expr& a, const Expr& b);

/// Left-value symbols occurring anywhere in `e` (Var and Deref nodes, and the
/// Vars inside Deref addresses), first-occurrence order.
std::vector<LValue> symbols(const Expr& e);
/// Top-level symbols only: Var and Deref nodes, not looking inside Deref.
std::vector<LValue> atoms(const Expr& e);

/// Substitutes Var/Deref nodes by key.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& by_key);

// ---------------------------------------------------------------- valuation

/// Element of Z extended with the two infinities.
struct ExtInt {
  enum class Kind { NegInf, Finite, PosInf };
  Kind kind = Kind::Finite;
  Int value;

  static ExtInt finite(Int v) { return {Kind::Finite, std::move(v)}; }
  static ExtInt neg_inf() { return {Kind::NegInf, 0}; }
  static ExtInt pos_inf() { return {Kind::PosInf, 0}; }
  bool is_finite() const { return kind == Kind::Finite; }
};

bool operator<=(const ExtInt& a, const ExtInt& b);
bool operator==(const ExtInt& a, const ExtInt& b);
std::string to_string(const ExtInt& v);

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Valuation {
  std::map<std::string, Int> vars;  // by left-value key
  Int deref_coeff = 2;
};

/// Throws EvalError on division by zero, -oo + +oo, a variable missing from
/// the valuation, or an infinity under an operator other than +, -, min, max.
ExtInt valuate(const Expr& e, const Valuation& v);

// --------------------------------------------------------------- comparison

enum class CmpResult { LE, GE, EQ, INCOMPARABLE, UNKNOWN };
const char* spelling(CmpResult r);

/// Closed integer interval with optional (infinite) ends.
struct Interval {
  std::optional<Int> lo, hi;

  static Interval top() { return {}; }
  static Interval point(const Int& v) { return {v, v}; }
  Interval meet(const Interval& o) const;
  bool contains(const Int& v) const { return (!lo || *lo <= v) && (!hi || v <= *hi); }
};

/// Facts about symbols assumed to hold (e.g. ranges already enforced by the
/// generated code). Keys are left-value keys.
struct Bounds {
  std::map<std::string, Interval> by_key;
  const Interval* find(const std::string& key) const;
};

/// Sound, incomplete decision of the preorder. LE means e1 <= e2 under every
/// valuation (that satisfies `env`, when given). Never returns INCOMPARABLE.
CmpResult compare(const Expr& e1, const Expr& e2, const Bounds* env = nullptr);

/// Proves e1 <= e2 (the LE half of compare).
bool proves_le(const Expr& e1, const Expr& e2, const Bounds* env = nullptr);

/// Interval enclosing every value of `e` (finite expressions; infinities give
/// open ends).
Interval interval_of(const Expr& e, const Bounds* env = nullptr);

/// Canonical form: polynomial normalization of min/max-free arithmetic,
/// constant folding, and collapse of decided min/max operands.
Expr simplify(const Expr& e, const Bounds* env = nullptr);

/// If `e` is `p + off` with p a pointer-typed symbol of coefficient 1 and
/// `off` free of pointer symbols, returns (p, off).
std::optional<std::pair<LValue, Expr>> split_pointer(const Expr& e);

/// Sum-of-monomials view of an expression: constant + sum of coef * mono.
/// Atoms of a monomial are Var, Deref, min/max, and non-constant / and %.
struct Monomial {
  Int coef;
  Expr mono;
  std::vector<Expr> atoms;
};
struct PolyView {
  std::vector<Monomial> monos;  // canonical order, no zero coefficient
  Int constant = 0;
};
/// nullopt when `e` has an infinity under arithmetic.
std::optional<PolyView> poly_view(const Expr& e);

}  // namespace ctxgen::sym
