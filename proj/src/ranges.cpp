#include "ctxgen/ranges.hpp"

#include <stdexcept>

namespace ctxgen {

using sym::Expr;

const char* spelling(Tri t) {
  switch (t) {
    case Tri::FALSE: return "FALSE";
    case Tri::TRUE: return "TRUE";
    case Tri::UNKNOWN: return "UNKNOWN";
  }
  return "?";
}

SymRange SymRange::of(Expr lo, Expr hi) {
  if (!lo || !hi) throw std::invalid_argument("range bound is null");
  SymRange r;
  r.lo_ = std::move(lo);
  r.hi_ = std::move(hi);
  return r;
}

bool SymRange::is_top() const {
  return !is_empty() && lo_->kind == sym::Node::Kind::NegInf && hi_->kind == sym::Node::Kind::PosInf;
}

std::string SymRange::render() const {
  if (is_empty()) return "∅";
  return "[" + sym::render(lo_) + "; " + sym::render(hi_) + "]";
}

bool same_range(const SymRange& a, const SymRange& b) {
  if (a.is_empty() || b.is_empty()) return a.is_empty() == b.is_empty();
  return sym::same(a.lo(), b.lo()) && sym::same(a.hi(), b.hi());
}

namespace {

bool has_inf(const Expr& e) {
  if (e->is_inf()) return true;
  for (const auto& k : e->kids)
    if (has_inf(k)) return true;
  return false;
}

/// x < y. x + 1 <= y is not enough once an infinity is involved: +oo + 1 is +oo.
bool proves_lt(const Expr& x0, const Expr& y0, const sym::Bounds* env) {
  Expr x = sym::simplify(x0, env), y = sym::simplify(y0, env);
  if (x->kind == sym::Node::Kind::PosInf || y->kind == sym::Node::Kind::NegInf) return false;
  if (x->kind == sym::Node::Kind::NegInf) return y->kind == sym::Node::Kind::PosInf || !has_inf(y);
  if (y->kind == sym::Node::Kind::PosInf) return !has_inf(x);
  if (has_inf(x) || has_inf(y)) return false;
  return sym::proves_le(sym::add(x, sym::constant(1)), y, env);
}

}  // namespace

bool proves_empty(const SymRange& r, const sym::Bounds* env) {
  if (r.is_empty()) return true;
  return proves_lt(r.hi(), r.lo(), env);
}

bool proves_nonempty(const SymRange& r, const sym::Bounds* env) {
  if (r.is_empty()) return false;
  return sym::proves_le(r.lo(), r.hi(), env);
}

SymRange join(const SymRange& a, const SymRange& b, const sym::Bounds* env) {
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  return SymRange::of(sym::simplify(sym::min(a.lo(), b.lo()), env), sym::simplify(sym::max(a.hi(), b.hi()), env));
}

SymRange meet(const SymRange& a, const SymRange& b, const sym::Bounds* env) {
  if (a.is_empty() || b.is_empty()) return SymRange::empty();
  SymRange r =
      SymRange::of(sym::simplify(sym::max(a.lo(), b.lo()), env), sym::simplify(sym::min(a.hi(), b.hi()), env));
  if (proves_empty(r, env)) return SymRange::empty();
  return r;
}

Tri leq(const SymRange& a, const SymRange& b, const sym::Bounds* env) {
  if (a.is_empty()) return Tri::TRUE;
  if (!b.is_empty() && sym::proves_le(b.lo(), a.lo(), env) && sym::proves_le(a.hi(), b.hi(), env))
    return Tri::TRUE;
  if (!proves_nonempty(a, env)) return Tri::UNKNOWN;
  if (b.is_empty()) return Tri::FALSE;
  if (proves_lt(a.lo(), b.lo(), env) || proves_lt(b.hi(), a.hi(), env)) return Tri::FALSE;
  return Tri::UNKNOWN;
}

SymRange neutral(const CType& t) {
  if (t.is_pointer()) return SymRange::empty();
  if (t.is_integer()) return SymRange::top();
  throw std::invalid_argument("no neutral range for " + t.spelling());
}

SymRange ival(CmpOp cop, const Expr& t) {
  switch (cop) {
    case CmpOp::Eq: return SymRange::point(t);
    case CmpOp::Le: return SymRange::of(sym::neg_inf(), t);
    case CmpOp::Ge: return SymRange::of(t, sym::pos_inf());
    default: throw std::invalid_argument(std::string("ival on operator ") + spelling(cop));
  }
}

bool ConcreteInterval::contains(const Int& v) const {
  auto x = sym::ExtInt::finite(v);
  return lo <= x && x <= hi;
}

std::optional<ConcreteInterval> concretize(const SymRange& r, const sym::Valuation& v) {
  if (r.is_empty()) return std::nullopt;
  ConcreteInterval c{sym::valuate(r.lo(), v), sym::valuate(r.hi(), v)};
  if (!(c.lo <= c.hi)) return std::nullopt;
  return c;
}

}  // namespace ctxgen
