#include "ctxgen/normalize.hpp"

#include <set>

namespace ctxgen {

namespace {

TermPtr int_const(const Int& v, Pos pos) { return make_const(v, pos, CType::logic_integer()); }

TermPtr int_binary(BinOp op, TermPtr l, TermPtr r, Pos pos) {
  return make_binary(op, std::move(l), std::move(r), pos, CType::logic_integer());
}

// Splits `t` into (rest, k) with t = rest + k; rest is null when t is constant.
std::pair<TermPtr, Int> split_offset(const TermPtr& t) {
  if (t->is_const()) return {nullptr, t->value};
  if (t->kind == Term::Kind::Binary && t->kid(1)->is_const()) {
    if (t->op == BinOp::Add) return {t->kid(0), t->kid(1)->value};
    if (t->op == BinOp::Sub) return {t->kid(0), -t->kid(1)->value};
  }
  return {t, 0};
}

TermPtr with_offset(const TermPtr& rest, const Int& k, Pos pos) {
  if (!rest) return int_const(k, pos);
  if (k == 0) return rest;
  if (k > 0) return int_binary(BinOp::Add, rest, int_const(k, pos), pos);
  return int_binary(BinOp::Sub, rest, int_const(-k, pos), pos);
}

bool is_zero(const TermPtr& t) { return t->is_const() && t->value == 0; }

TermPtr fold_binary(BinOp op, const TermPtr& l, const TermPtr& r, Pos pos) {
  if (l->is_const() && r->is_const()) {
    const Int& a = l->value;
    const Int& b = r->value;
    switch (op) {
      case BinOp::Add: return int_const(a + b, pos);
      case BinOp::Sub: return int_const(a - b, pos);
      case BinOp::Mul: return int_const(a * b, pos);
      case BinOp::Div:
        if (b != 0) return int_const(c_div(a, b), pos);
        break;
      case BinOp::Mod:
        if (b != 0) return int_const(c_mod(a, b), pos);
        break;
    }
    return int_binary(op, l, r, pos);
  }
  if (op == BinOp::Add || op == BinOp::Sub) {
    TermPtr ll = l, rr = r;
    if (op == BinOp::Add && ll->is_const()) std::swap(ll, rr);
    if (rr->is_const()) {
      auto [rest, k] = split_offset(ll);
      Int c = op == BinOp::Add ? rr->value : -rr->value;
      return with_offset(rest, k + c, pos);
    }
    if (op == BinOp::Sub && same_term(*l, *r)) return int_const(0, pos);
    return int_binary(op, l, r, pos);
  }
  if (op == BinOp::Mul) {
    if ((l->is_const() && l->value == 0) || (r->is_const() && r->value == 0)) return int_const(0, pos);
    if (l->is_const() && l->value == 1) return r;
    if (r->is_const() && r->value == 1) return l;
    if (l->is_const()) return int_binary(op, r, l, pos);
  }
  if (op == BinOp::Div && r->is_const() && r->value == 1) return l;
  if (op == BinOp::Mod && r->is_const() && (r->value == 1 || r->value == -1)) return int_const(0, pos);
  return int_binary(op, l, r, pos);
}

}  // namespace

TermPtr normalize_term(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Const:
    case Term::Kind::Var: return t;
    case Term::Kind::Field: return make_field(normalize_term(t->kid(0)), t->name, t->pos, t->type);
    case Term::Kind::Deref: return make_deref(normalize_term(t->kid(0)), t->pos, t->type);
    case Term::Kind::Binary:
      return fold_binary(t->op, normalize_term(t->kid(0)), normalize_term(t->kid(1)), t->pos);
    case Term::Kind::Disp: {
      TermPtr base = normalize_term(t->kid(0));
      TermPtr lo = normalize_term(t->kid(1));
      TermPtr hi = normalize_term(t->kid(2));
      if (base->kind == Term::Kind::Disp) {
        lo = fold_binary(BinOp::Add, base->kid(1), lo, t->pos);
        hi = fold_binary(BinOp::Add, base->kid(2), hi, t->pos);
        base = base->kid(0);
      }
      if (is_zero(lo) && is_zero(hi)) return base;
      return make_disp(base, lo, hi, t->pos, t->type);
    }
  }
  return t;
}

PredPtr normalize_terms(const PredPtr& p) {
  switch (p->kind) {
    case Predicate::Kind::True:
    case Predicate::Kind::False: return p;
    case Predicate::Kind::Defined: return make_defined(p->def, normalize_term(p->mem), p->pos);
    case Predicate::Kind::Not: return make_not(normalize_terms(p->kids[0]), p->pos);
    case Predicate::Kind::And:
    case Predicate::Kind::Or: {
      std::vector<PredPtr> kids;
      for (const auto& k : p->kids) kids.push_back(normalize_terms(k));
      return p->kind == Predicate::Kind::And ? make_and(std::move(kids), p->pos) : make_or(std::move(kids), p->pos);
    }
    case Predicate::Kind::Cmp: {
      TermPtr l = normalize_term(p->lhs);
      TermPtr r = normalize_term(p->rhs);
      CmpOp op = p->op;
      if (l->type->is_integer()) {
        if (op == CmpOp::Lt) {
          l = fold_binary(BinOp::Add, l, int_const(1, p->pos), p->pos);
          op = CmpOp::Le;
        } else if (op == CmpOp::Gt) {
          r = fold_binary(BinOp::Add, r, int_const(1, p->pos), p->pos);
          op = CmpOp::Ge;
        }
        if (l->is_const() && r->is_const()) {
          const Int& a = l->value;
          const Int& b = r->value;
          bool v = op == CmpOp::Eq ? a == b : op == CmpOp::Ne ? a != b : op == CmpOp::Le ? a <= b : a >= b;
          return make_bool(v, p->pos);
        }
      }
      return make_cmp(op, l, r, p->pos);
    }
  }
  return p;
}

bool Literal::is_pointer_cmp() const {
  return atom->kind == Predicate::Kind::Cmp && atom->lhs->type && atom->lhs->type->is_pointerish();
}

std::string render(const Literal& l) {
  if (l.positive) return render(*l.atom);
  if (l.is_pointer_cmp()) return render(*l.atom->lhs) + " != " + render(*l.atom->rhs);
  return "!" + render(*l.atom);
}

namespace {

using Dnf = std::vector<ConjunctiveClause>;

class DnfBuilder {
 public:
  explicit DnfBuilder(std::size_t limit) : limit_(limit) {}

  Dnf build(const PredPtr& p, bool positive) {
    switch (p->kind) {
      case Predicate::Kind::True: return positive ? Dnf{{}} : Dnf{};
      case Predicate::Kind::False: return positive ? Dnf{} : Dnf{{}};
      case Predicate::Kind::Not: return build(p->kids[0], !positive);
      case Predicate::Kind::And:
      case Predicate::Kind::Or: {
        bool conj = (p->kind == Predicate::Kind::And) == positive;
        Dnf acc = conj ? Dnf{{}} : Dnf{};
        for (const auto& k : p->kids) {
          Dnf d = build(k, positive);
          acc = conj ? product(acc, d, p->pos) : sum(std::move(acc), std::move(d), p->pos);
        }
        return acc;
      }
      case Predicate::Kind::Defined: return Dnf{{Literal{positive, p}}};
      case Predicate::Kind::Cmp: return cmp(p, positive);
    }
    return {};
  }

 private:
  Dnf cmp(const PredPtr& p, bool positive) {
    if (p->lhs->type->is_pointerish()) {
      bool eq = (p->op == CmpOp::Eq) == positive;
      PredPtr atom = p->op == CmpOp::Eq ? p : make_cmp(CmpOp::Eq, p->lhs, p->rhs, p->pos);
      return Dnf{{Literal{eq, atom}}};
    }
    const TermPtr& a = p->lhs;
    const TermPtr& b = p->rhs;
    Pos pos = p->pos;
    auto lit = [&](CmpOp op, TermPtr l, TermPtr r) {
      PredPtr q = normalize_terms(make_cmp(op, std::move(l), std::move(r), pos));
      if (q->kind == Predicate::Kind::True) return Dnf{{}};
      if (q->kind == Predicate::Kind::False) return Dnf{};
      return Dnf{{Literal{true, q}}};
    };
    auto plus = [&](const TermPtr& t, int k) {
      return normalize_term(make_binary(k > 0 ? BinOp::Add : BinOp::Sub, t, int_const(1, pos), pos,
                                        CType::logic_integer()));
    };
    CmpOp op = p->op;
    if (!positive) {
      switch (op) {
        case CmpOp::Eq: op = CmpOp::Ne; break;
        case CmpOp::Ne: op = CmpOp::Eq; break;
        case CmpOp::Le: return lit(CmpOp::Le, plus(b, 1), a);   // b + 1 <= a
        case CmpOp::Ge: return lit(CmpOp::Le, plus(a, 1), b);   // a + 1 <= b
        case CmpOp::Lt: return lit(CmpOp::Le, b, a);
        case CmpOp::Gt: return lit(CmpOp::Le, a, b);
      }
    }
    switch (op) {
      case CmpOp::Ne: return sum(lit(CmpOp::Le, a, plus(b, -1)), lit(CmpOp::Ge, a, plus(b, 1)), pos);
      case CmpOp::Lt: return lit(CmpOp::Le, plus(a, 1), b);
      case CmpOp::Gt: return lit(CmpOp::Ge, a, plus(b, 1));
      default: return lit(op, a, b);
    }
  }

  Dnf sum(Dnf a, Dnf b, Pos pos) {
    for (auto& c : b) a.push_back(std::move(c));
    check(a.size(), pos);
    return a;
  }

  Dnf product(const Dnf& a, const Dnf& b, Pos pos) {
    check(a.size() * b.size(), pos);
    Dnf out;
    for (const auto& x : a)
      for (const auto& y : b) {
        ConjunctiveClause c = x;
        c.insert(c.end(), y.begin(), y.end());
        out.push_back(std::move(c));
      }
    return out;
  }

  void check(std::size_t n, Pos pos) const {
    if (n > limit_)
      throw FrontendError(ErrorKind::Resource, pos,
                          "disjunctive normal form exceeds " + std::to_string(limit_) + " disjuncts");
  }

  std::size_t limit_;
};

ConjunctiveClause order_and_dedup(const ConjunctiveClause& c) {
  ConjunctiveClause out;
  std::set<std::string> seen;
  auto take = [&](auto pred) {
    for (const auto& l : c)
      if (pred(l) && seen.insert(render(l)).second) out.push_back(l);
  };
  take([](const Literal& l) { return l.positive; });
  take([](const Literal& l) { return !l.positive && !l.is_defined(); });
  take([](const Literal& l) { return !l.positive && l.is_defined(); });
  return out;
}

}  // namespace

std::vector<ConjunctiveClause> to_dnf(const PredPtr& p, std::size_t max_disjuncts) {
  DnfBuilder b(max_disjuncts);
  Dnf d = b.build(normalize_terms(p), true);
  for (auto& c : d) c = order_and_dedup(c);
  return d;
}

}  // namespace ctxgen
