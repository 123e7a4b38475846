#include "ctxgen/symbolic.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace ctxgen::sym {

// ------------------------------------------------------------ construction

namespace {
Expr node(Node n) { return std::make_shared<const Node>(std::move(n)); }
}  // namespace

Expr constant(const Int& v) {
  Node n;
  n.kind = Node::Kind::Const;
  n.value = v;
  return node(std::move(n));
}

Expr var(const LValue& lv) {
  Node n;
  n.kind = Node::Kind::Var;
  n.lv = lv;
  return node(std::move(n));
}

Expr deref(Expr inner, const LValue& lv) {
  Node n;
  n.kind = Node::Kind::Deref;
  n.lv = lv;
  n.kids = {std::move(inner)};
  return node(std::move(n));
}

Expr binary(BinOp op, Expr l, Expr r) {
  Node n;
  n.kind = Node::Kind::Binary;
  n.op = op;
  n.kids = {std::move(l), std::move(r)};
  return node(std::move(n));
}

Expr min(Expr a, Expr b) {
  Node n;
  n.kind = Node::Kind::Min;
  n.kids = {std::move(a), std::move(b)};
  return node(std::move(n));
}

Expr max(Expr a, Expr b) {
  Node n;
  n.kind = Node::Kind::Max;
  n.kids = {std::move(a), std::move(b)};
  return node(std::move(n));
}

Expr neg_inf() {
  static const Expr e = [] {
    Node n;
    n.kind = Node::Kind::NegInf;
    return node(std::move(n));
  }();
  return e;
}

Expr pos_inf() {
  static const Expr e = [] {
    Node n;
    n.kind = Node::Kind::PosInf;
    return node(std::move(n));
  }();
  return e;
}

Expr add(Expr a, Expr b) {
  if (a->is_const() && b->is_const()) return constant(a->value + b->value);
  if (b->is_const() && b->value == 0) return a;
  if (a->is_const() && a->value == 0) return b;
  if (b->is_const() && b->value < 0) return binary(BinOp::Sub, std::move(a), constant(-b->value));
  return binary(BinOp::Add, std::move(a), std::move(b));
}

Expr sub(Expr a, Expr b) {
  if (a->is_const() && b->is_const()) return constant(a->value - b->value);
  if (b->is_const() && b->value == 0) return a;
  if (b->is_const() && b->value < 0) return binary(BinOp::Add, std::move(a), constant(-b->value));
  return binary(BinOp::Sub, std::move(a), std::move(b));
}

Expr mul(Expr a, Expr b) {
  if (a->is_const() && b->is_const()) return constant(a->value * b->value);
  if ((a->is_const() && a->value == 0) || (b->is_const() && b->value == 0)) return constant(0);
  if (a->is_const() && a->value == 1) return b;
  if (b->is_const() && b->value == 1) return a;
  return binary(BinOp::Mul, std::move(a), std::move(b));
}

Expr from_term(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Const: return constant(t->value);
    case Term::Kind::Var:
    case Term::Kind::Field: return var(LValue(t));
    case Term::Kind::Deref: return deref(from_term(t->kid(0)), LValue(t));
    case Term::Kind::Disp:
      if (!same_term(*t->kid(1), *t->kid(2)))
        throw std::invalid_argument("displacement range has no symbolic image: " + ctxgen::render(*t));
      return add(from_term(t->kid(0)), from_term(t->kid(1)));
    case Term::Kind::Binary: return binary(t->op, from_term(t->kid(0)), from_term(t->kid(1)));
  }
  throw std::logic_error("unreachable");
}

// --------------------------------------------------------------- rendering

namespace {
int prec(const Node& n) {
  if (n.kind == Node::Kind::Binary) return (n.op == BinOp::Add || n.op == BinOp::Sub) ? 1 : 2;
  if (n.kind == Node::Kind::Const && n.value < 0) return 2;
  return 3;
}
}  // namespace

std::string render(const Expr& e) {
  switch (e->kind) {
    case Node::Kind::Const: return ctxgen::to_string(e->value);
    case Node::Kind::Var:
    case Node::Kind::Deref: return e->lv.key();
    case Node::Kind::NegInf: return "-oo";
    case Node::Kind::PosInf: return "+oo";
    case Node::Kind::Min:
    case Node::Kind::Max:
      return std::string(e->kind == Node::Kind::Min ? "min(" : "max(") + render(e->kids[0]) + ", " +
             render(e->kids[1]) + ")";
    case Node::Kind::Binary: {
      int p = prec(*e);
      std::string l = render(e->kids[0]), r = render(e->kids[1]);
      if (prec(*e->kids[0]) < p) l = "(" + l + ")";
      if (prec(*e->kids[1]) <= p) r = "(" + r + ")";
      return l + " " + spelling(e->op) + " " + r;
    }
  }
  return "?";
}

bool same(const Expr& a, const Expr& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->kids.size() != b->kids.size()) return false;
  switch (a->kind) {
    case Node::Kind::Const: return a->value == b->value;
    case Node::Kind::Var:
    case Node::Kind::Deref: return a->lv.key() == b->lv.key();
    case Node::Kind::Binary:
      if (a->op != b->op) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!same(a->kids[i], b->kids[i])) return false;
  return true;
}

namespace {
void collect_symbols(const Expr& e, bool deep, std::vector<LValue>& out, std::set<std::string>& seen) {
  if (e->kind == Node::Kind::Var || e->kind == Node::Kind::Deref) {
    if (deep && e->kind == Node::Kind::Deref) collect_symbols(e->kids[0], deep, out, seen);
    if (seen.insert(e->lv.key()).second) out.push_back(e->lv);
    return;
  }
  for (const auto& k : e->kids) collect_symbols(k, deep, out, seen);
}
}  // namespace

std::vector<LValue> symbols(const Expr& e) {
  std::vector<LValue> out;
  std::set<std::string> seen;
  collect_symbols(e, true, out, seen);
  return out;
}

std::vector<LValue> atoms(const Expr& e) {
  std::vector<LValue> out;
  std::set<std::string> seen;
  collect_symbols(e, false, out, seen);
  return out;
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& by_key) {
  if (e->kind == Node::Kind::Var || e->kind == Node::Kind::Deref) {
    auto it = by_key.find(e->lv.key());
    return it == by_key.end() ? e : it->second;
  }
  if (e->kids.empty()) return e;
  Node n = *e;
  bool changed = false;
  for (auto& k : n.kids) {
    Expr s = substitute(k, by_key);
    changed |= s != k;
    k = s;
  }
  return changed ? node(std::move(n)) : e;
}

// ---------------------------------------------------------------- valuation

bool operator<=(const ExtInt& a, const ExtInt& b) {
  if (a.kind == ExtInt::Kind::NegInf || b.kind == ExtInt::Kind::PosInf) return true;
  if (a.kind == ExtInt::Kind::PosInf || b.kind == ExtInt::Kind::NegInf) return false;
  return a.value <= b.value;
}

bool operator==(const ExtInt& a, const ExtInt& b) {
  return a.kind == b.kind && (a.kind != ExtInt::Kind::Finite || a.value == b.value);
}

std::string to_string(const ExtInt& v) {
  switch (v.kind) {
    case ExtInt::Kind::NegInf: return "-oo";
    case ExtInt::Kind::PosInf: return "+oo";
    default: return ctxgen::to_string(v.value);
  }
}

namespace {
ExtInt negate(const ExtInt& a) {
  if (a.kind == ExtInt::Kind::NegInf) return ExtInt::pos_inf();
  if (a.kind == ExtInt::Kind::PosInf) return ExtInt::neg_inf();
  return ExtInt::finite(-a.value);
}

ExtInt ext_add(const ExtInt& a, const ExtInt& b) {
  if (a.is_finite() && b.is_finite()) return ExtInt::finite(a.value + b.value);
  if (!a.is_finite() && !b.is_finite() && a.kind != b.kind) throw EvalError("-oo + +oo is undefined");
  return a.is_finite() ? b : a;
}
}  // namespace

ExtInt valuate(const Expr& e, const Valuation& v) {
  switch (e->kind) {
    case Node::Kind::Const: return ExtInt::finite(e->value);
    case Node::Kind::NegInf: return ExtInt::neg_inf();
    case Node::Kind::PosInf: return ExtInt::pos_inf();
    case Node::Kind::Var: {
      auto it = v.vars.find(e->lv.key());
      if (it == v.vars.end()) throw EvalError("no value for " + e->lv.key());
      return ExtInt::finite(it->second);
    }
    case Node::Kind::Deref: {
      ExtInt inner = valuate(e->kids[0], v);
      if (!inner.is_finite()) throw EvalError("infinite address");
      return ExtInt::finite(inner.value * v.deref_coeff);
    }
    case Node::Kind::Min:
    case Node::Kind::Max: {
      ExtInt a = valuate(e->kids[0], v), b = valuate(e->kids[1], v);
      bool a_le_b = a <= b;
      return (e->kind == Node::Kind::Min) == a_le_b ? a : b;
    }
    case Node::Kind::Binary: {
      ExtInt a = valuate(e->kids[0], v), b = valuate(e->kids[1], v);
      if (e->op == BinOp::Add) return ext_add(a, b);
      if (e->op == BinOp::Sub) return ext_add(a, negate(b));
      if (!a.is_finite() || !b.is_finite()) throw EvalError("infinity under an arithmetic operator");
      switch (e->op) {
        case BinOp::Mul: return ExtInt::finite(a.value * b.value);
        case BinOp::Div:
          if (b.value == 0) throw EvalError("division by zero");
          return ExtInt::finite(c_div(a.value, b.value));
        case BinOp::Mod:
          if (b.value == 0) throw EvalError("modulo by zero");
          return ExtInt::finite(c_mod(a.value, b.value));
        default: break;
      }
    }
  }
  throw EvalError("unreachable");
}

// ---------------------------------------------------------------- intervals

Interval Interval::meet(const Interval& o) const {
  Interval r = *this;
  if (o.lo && (!r.lo || *o.lo > *r.lo)) r.lo = o.lo;
  if (o.hi && (!r.hi || *o.hi < *r.hi)) r.hi = o.hi;
  return r;
}

const Interval* Bounds::find(const std::string& key) const {
  auto it = by_key.find(key);
  return it == by_key.end() ? nullptr : &it->second;
}

namespace {

using OptInt = std::optional<Int>;

Interval iv_add(const Interval& a, const Interval& b) {
  Interval r;
  if (a.lo && b.lo) r.lo = *a.lo + *b.lo;
  if (a.hi && b.hi) r.hi = *a.hi + *b.hi;
  return r;
}

Interval iv_neg(const Interval& a) {
  Interval r;
  if (a.hi) r.lo = -*a.hi;
  if (a.lo) r.hi = -*a.lo;
  return r;
}

Interval iv_scale(const Interval& a, const Int& c) {
  if (c == 0) return Interval::point(0);
  Interval r;
  if (c > 0) {
    if (a.lo) r.lo = *a.lo * c;
    if (a.hi) r.hi = *a.hi * c;
  } else {
    if (a.hi) r.lo = *a.hi * c;
    if (a.lo) r.hi = *a.lo * c;
  }
  return r;
}

// Endpoint product on Z extended with infinities; 0 * oo = 0 is the right
// convention for interval endpoints.
ExtInt end_mul(const ExtInt& a, const ExtInt& b) {
  if ((a.is_finite() && a.value == 0) || (b.is_finite() && b.value == 0)) return ExtInt::finite(0);
  if (a.is_finite() && b.is_finite()) return ExtInt::finite(a.value * b.value);
  auto sign = [](const ExtInt& x) {
    return x.kind == ExtInt::Kind::NegInf ? -1 : x.kind == ExtInt::Kind::PosInf ? 1 : (x.value < 0 ? -1 : 1);
  };
  return sign(a) * sign(b) < 0 ? ExtInt::neg_inf() : ExtInt::pos_inf();
}

ExtInt lo_end(const Interval& a) { return a.lo ? ExtInt::finite(*a.lo) : ExtInt::neg_inf(); }
ExtInt hi_end(const Interval& a) { return a.hi ? ExtInt::finite(*a.hi) : ExtInt::pos_inf(); }

Interval iv_mul(const Interval& a, const Interval& b) {
  ExtInt c[4] = {end_mul(lo_end(a), lo_end(b)), end_mul(lo_end(a), hi_end(b)), end_mul(hi_end(a), lo_end(b)),
                 end_mul(hi_end(a), hi_end(b))};
  ExtInt lo = c[0], hi = c[0];
  for (const auto& x : c) {
    if (x <= lo) lo = x;
    if (hi <= x) hi = x;
  }
  Interval r;
  if (lo.is_finite()) r.lo = lo.value;
  if (hi.is_finite()) r.hi = hi.value;
  return r;
}

Interval iv_div_const(const Interval& a, const Int& c) {
  Interval r;
  if (c > 0) {
    if (a.lo) r.lo = c_div(*a.lo, c);
    if (a.hi) r.hi = c_div(*a.hi, c);
  } else {
    if (a.hi) r.lo = c_div(*a.hi, c);
    if (a.lo) r.hi = c_div(*a.lo, c);
  }
  return r;
}

Interval iv_mod(const Interval& a, const Interval& d) {
  // |a % d| <= |d| - 1 and the sign follows a.
  OptInt m;
  if (d.lo && d.hi) m = std::max(abs(*d.lo), abs(*d.hi)) - 1;
  Interval r;
  bool nonneg = a.lo && *a.lo >= 0;
  bool nonpos = a.hi && *a.hi <= 0;
  if (nonneg) {
    r.lo = Int(0);
    r.hi = a.hi;
    if (m && (!r.hi || *m < *r.hi)) r.hi = m;
  } else if (nonpos) {
    r.hi = Int(0);
    r.lo = a.lo;
    if (m && (!r.lo || -*m > *r.lo)) r.lo = -*m;
  } else if (m) {
    r.lo = -*m;
    r.hi = m;
    if (a.lo && *a.lo > *r.lo) r.lo = a.lo;
    if (a.hi && *a.hi < *r.hi) r.hi = a.hi;
  }
  return r;
}

Interval iv_min(const Interval& a, const Interval& b) {
  Interval r;
  if (a.lo && b.lo) r.lo = std::min(*a.lo, *b.lo);
  if (!a.hi) r.hi = b.hi;
  else if (!b.hi) r.hi = a.hi;
  else r.hi = std::min(*a.hi, *b.hi);
  return r;
}

Interval iv_max(const Interval& a, const Interval& b) { return iv_neg(iv_min(iv_neg(a), iv_neg(b))); }

// ------------------------------------------------------------- polynomials

using Mono = std::vector<std::string>;  // sorted atom keys; empty = constant

struct Poly {
  std::map<Mono, Int> terms;

  void add_term(const Mono& m, const Int& c) {
    if (c == 0) return;
    Int& slot = terms[m];
    slot += c;
    if (slot == 0) terms.erase(m);
  }
  bool is_const() const { return terms.empty() || (terms.size() == 1 && terms.begin()->first.empty()); }
  Int constant() const {
    auto it = terms.find(Mono{});
    return it == terms.end() ? Int(0) : it->second;
  }
};

Poly poly_add(const Poly& a, const Poly& b, const Int& sign) {
  Poly r = a;
  for (const auto& [m, c] : b.terms) r.add_term(m, c * sign);
  return r;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      Mono m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      std::sort(m.begin(), m.end());
      r.add_term(m, ca * cb);
    }
  return r;
}

struct AtomTable {
  std::map<std::string, Expr> atoms;

  Poly atom(const Expr& e) {
    std::string k = render(e);
    atoms.emplace(k, e);
    Poly p;
    p.add_term(Mono{k}, 1);
    return p;
  }
};

Expr simplify_rec(const Expr& e, const Bounds* env, int& budget);

// Returns nullopt when `e` has an infinity under arithmetic.
std::optional<Poly> to_poly(const Expr& e, AtomTable& tab) {
  switch (e->kind) {
    case Node::Kind::Const: {
      Poly p;
      p.add_term(Mono{}, e->value);
      return p;
    }
    case Node::Kind::NegInf:
    case Node::Kind::PosInf: return std::nullopt;
    case Node::Kind::Var:
    case Node::Kind::Deref:
    case Node::Kind::Min:
    case Node::Kind::Max: return tab.atom(e);
    case Node::Kind::Binary: {
      if (e->op == BinOp::Div || e->op == BinOp::Mod) {
        const Expr& l = e->kids[0];
        const Expr& r = e->kids[1];
        if (l->is_const() && r->is_const() && r->value != 0) {
          Poly p;
          p.add_term(Mono{}, e->op == BinOp::Div ? c_div(l->value, r->value) : c_mod(l->value, r->value));
          return p;
        }
        if (l->is_inf() || r->is_inf()) return std::nullopt;
        return tab.atom(e);
      }
      auto a = to_poly(e->kids[0], tab);
      if (!a) return std::nullopt;
      auto b = to_poly(e->kids[1], tab);
      if (!b) return std::nullopt;
      if (e->op == BinOp::Add) return poly_add(*a, *b, 1);
      if (e->op == BinOp::Sub) return poly_add(*a, *b, -1);
      return poly_mul(*a, *b);
    }
  }
  return std::nullopt;
}

Expr mono_expr(const Mono& m, const AtomTable& tab) {
  Expr acc;
  for (const auto& k : m) {
    Expr a = tab.atoms.at(k);
    acc = acc ? binary(BinOp::Mul, acc, a) : a;
  }
  return acc;
}

Expr from_poly(const Poly& p, const AtomTable& tab) {
  std::vector<std::pair<Mono, Int>> pos, neg;
  for (const auto& [m, c] : p.terms) {
    if (m.empty()) continue;
    (c > 0 ? pos : neg).emplace_back(m, c);
  }
  Int k = p.constant();
  auto scaled = [&](const Mono& m, const Int& c) {
    Expr me = mono_expr(m, tab);
    return c == 1 ? me : binary(BinOp::Mul, constant(c), me);
  };
  Expr acc;
  if (pos.empty() && k > 0) {
    acc = constant(k);
    k = 0;
  }
  for (const auto& [m, c] : pos) acc = acc ? binary(BinOp::Add, acc, scaled(m, c)) : scaled(m, c);
  for (const auto& [m, c] : neg)
    acc = acc ? binary(BinOp::Sub, acc, scaled(m, -c)) : binary(BinOp::Sub, constant(0), scaled(m, -c));
  if (!acc) return constant(k);
  if (k > 0) acc = binary(BinOp::Add, acc, constant(k));
  if (k < 0) acc = binary(BinOp::Sub, acc, constant(-k));
  return acc;
}

Interval atom_interval(const Expr& a, const Bounds* env);

Interval poly_interval(const Poly& p, const AtomTable& tab, const Bounds* env) {
  Interval total = Interval::point(0);
  for (const auto& [m, c] : p.terms) {
    Interval t = Interval::point(1);
    // even powers of one atom are non-negative
    std::map<std::string, int> powers;
    for (const auto& k : m) ++powers[k];
    for (const auto& [k, n] : powers) {
      Interval ai = atom_interval(tab.atoms.at(k), env);
      Interval pw = ai;
      for (int i = 1; i < n; ++i) pw = iv_mul(pw, ai);
      if (n % 2 == 0) pw = pw.meet(Interval{Int(0), std::nullopt});
      t = iv_mul(t, pw);
    }
    total = iv_add(total, iv_scale(t, c));
  }
  return total;
}

Interval tree_interval(const Expr& e, const Bounds* env) {
  switch (e->kind) {
    case Node::Kind::Const: return Interval::point(e->value);
    case Node::Kind::NegInf:
    case Node::Kind::PosInf: return Interval::top();
    case Node::Kind::Var:
    case Node::Kind::Deref: {
      if (env)
        if (const Interval* iv = env->find(e->lv.key())) return *iv;
      return Interval::top();
    }
    case Node::Kind::Min: return iv_min(tree_interval(e->kids[0], env), tree_interval(e->kids[1], env));
    case Node::Kind::Max: return iv_max(tree_interval(e->kids[0], env), tree_interval(e->kids[1], env));
    case Node::Kind::Binary: {
      Interval a = tree_interval(e->kids[0], env);
      Interval b = tree_interval(e->kids[1], env);
      switch (e->op) {
        case BinOp::Add: return iv_add(a, b);
        case BinOp::Sub: return iv_add(a, iv_neg(b));
        case BinOp::Mul: return iv_mul(a, b);
        case BinOp::Div:
          if (e->kids[1]->is_const() && e->kids[1]->value != 0) return iv_div_const(a, e->kids[1]->value);
          return Interval::top();
        case BinOp::Mod: return iv_mod(a, b);
      }
    }
  }
  return Interval::top();
}

Interval atom_interval(const Expr& a, const Bounds* env) {
  if (a->kind == Node::Kind::Binary && (a->op == BinOp::Div || a->op == BinOp::Mod)) {
    AtomTable tab;
    Interval inner_l = tree_interval(a->kids[0], env);
    if (auto p = to_poly(a->kids[0], tab)) inner_l = inner_l.meet(poly_interval(*p, tab, env));
    Interval inner_r = tree_interval(a->kids[1], env);
    if (a->op == BinOp::Mod) return iv_mod(inner_l, inner_r);
    if (a->kids[1]->is_const() && a->kids[1]->value != 0) return iv_div_const(inner_l, a->kids[1]->value);
    return Interval::top();
  }
  return tree_interval(a, env);
}

// ------------------------------------------------------------- comparison

// Pushes min/max above +, -, multiplication by a constant and division by a
// constant, where the operation is monotone.
Expr lift(const Expr& e) {
  if (e->kind != Node::Kind::Binary) return e;
  Expr l = lift(e->kids[0]);
  Expr r = lift(e->kids[1]);
  auto rebuild = [&](const Expr& x, const Expr& y) { return lift(binary(e->op, x, y)); };
  auto swap_kind = [](Node::Kind k) { return k == Node::Kind::Min ? Node::Kind::Max : Node::Kind::Min; };
  auto mk = [](Node::Kind k, Expr a, Expr b) { return k == Node::Kind::Min ? min(a, b) : max(a, b); };
  switch (e->op) {
    case BinOp::Add:
      if (l->is_minmax()) return mk(l->kind, rebuild(l->kids[0], r), rebuild(l->kids[1], r));
      if (r->is_minmax()) return mk(r->kind, rebuild(l, r->kids[0]), rebuild(l, r->kids[1]));
      break;
    case BinOp::Sub:
      if (l->is_minmax()) return mk(l->kind, rebuild(l->kids[0], r), rebuild(l->kids[1], r));
      if (r->is_minmax()) return mk(swap_kind(r->kind), rebuild(l, r->kids[0]), rebuild(l, r->kids[1]));
      break;
    case BinOp::Mul:
      if (l->is_minmax() && r->is_const())
        return mk(r->value >= 0 ? l->kind : swap_kind(l->kind), rebuild(l->kids[0], r), rebuild(l->kids[1], r));
      if (r->is_minmax() && l->is_const())
        return mk(l->value >= 0 ? r->kind : swap_kind(r->kind), rebuild(l, r->kids[0]), rebuild(l, r->kids[1]));
      break;
    case BinOp::Div:
      if (l->is_minmax() && r->is_const() && r->value != 0)
        return mk(r->value > 0 ? l->kind : swap_kind(l->kind), rebuild(l->kids[0], r), rebuild(l->kids[1], r));
      break;
    case BinOp::Mod: break;
  }
  if (l == e->kids[0] && r == e->kids[1]) return e;
  return binary(e->op, l, r);
}

bool le(const Expr& a, const Expr& b, const Bounds* env, int& budget) {
  if (--budget < 0) return false;
  if (same(a, b)) return true;
  if (a->kind == Node::Kind::NegInf || b->kind == Node::Kind::PosInf) return true;
  if (a->kind == Node::Kind::PosInf || b->kind == Node::Kind::NegInf) return false;
  if (a->kind == Node::Kind::Max) return le(a->kids[0], b, env, budget) && le(a->kids[1], b, env, budget);
  if (b->kind == Node::Kind::Min) return le(a, b->kids[0], env, budget) && le(a, b->kids[1], env, budget);
  if (a->kind == Node::Kind::Min || b->kind == Node::Kind::Max) {
    if (a->kind == Node::Kind::Min && (le(a->kids[0], b, env, budget) || le(a->kids[1], b, env, budget)))
      return true;
    if (b->kind == Node::Kind::Max && (le(a, b->kids[0], env, budget) || le(a, b->kids[1], env, budget)))
      return true;
    // fall through: the difference may still be decided with min/max as atoms
  } else {
    Expr la = lift(a), lb = lift(b);
    if (la->is_minmax() || lb->is_minmax()) return le(la, lb, env, budget);
  }
  AtomTable tab;
  auto pa = to_poly(a, tab);
  auto pb = to_poly(b, tab);
  if (!pa || !pb) return false;
  Poly d = poly_add(*pb, *pa, -1);
  if (d.is_const()) return d.constant() >= 0;
  Interval iv = poly_interval(d, tab, env);
  return iv.lo && *iv.lo >= 0;
}

constexpr int kCompareBudget = 4000;

}  // namespace

const char* spelling(CmpResult r) {
  switch (r) {
    case CmpResult::LE: return "LE";
    case CmpResult::GE: return "GE";
    case CmpResult::EQ: return "EQ";
    case CmpResult::INCOMPARABLE: return "INCOMPARABLE";
    case CmpResult::UNKNOWN: return "UNKNOWN";
  }
  return "?";
}

bool proves_le(const Expr& e1, const Expr& e2, const Bounds* env) {
  int budget = kCompareBudget;
  try {
    return le(e1, e2, env, budget);
  } catch (const EvalError&) {
    return false;
  }
}

CmpResult compare(const Expr& e1, const Expr& e2, const Bounds* env) {
  bool a = proves_le(e1, e2, env);
  bool b = proves_le(e2, e1, env);
  if (a && b) return CmpResult::EQ;
  if (a) return CmpResult::LE;
  if (b) return CmpResult::GE;
  return CmpResult::UNKNOWN;
}

Interval interval_of(const Expr& e, const Bounds* env) {
  Interval iv = tree_interval(e, env);
  AtomTable tab;
  if (auto p = to_poly(e, tab)) iv = iv.meet(poly_interval(*p, tab, env));
  return iv;
}

// ------------------------------------------------------------- simplify

namespace {

void flatten(const Expr& e, Node::Kind k, std::vector<Expr>& out) {
  if (e->kind == k) {
    flatten(e->kids[0], k, out);
    flatten(e->kids[1], k, out);
  } else {
    out.push_back(e);
  }
}

Expr simplify_rec(const Expr& e, const Bounds* env, int& budget) {
  switch (e->kind) {
    case Node::Kind::Const:
    case Node::Kind::Var:
    case Node::Kind::Deref:
    case Node::Kind::NegInf:
    case Node::Kind::PosInf: return e;
    case Node::Kind::Min:
    case Node::Kind::Max: {
      std::vector<Expr> ops;
      flatten(e, e->kind, ops);
      for (auto& o : ops) o = simplify_rec(o, env, budget);
      std::vector<Expr> flat;
      for (const auto& o : ops) flatten(o, e->kind, flat);
      // canonical operand order, so that min(a, b) and min(b, a) agree
      std::vector<std::pair<std::string, Expr>> keyed;
      for (const auto& o : flat) keyed.emplace_back(render(o), o);
      std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = keyed[i].second;
      bool is_min = e->kind == Node::Kind::Min;
      // x is dropped when another operand y is provably better (y <= x for min)
      std::vector<bool> drop(flat.size(), false);
      for (std::size_t i = 0; i < flat.size(); ++i)
        for (std::size_t j = 0; j < flat.size() && !drop[i]; ++j) {
          if (i == j || drop[j]) continue;
          int b1 = budget;
          bool j_better = is_min ? le(flat[j], flat[i], env, b1) : le(flat[i], flat[j], env, b1);
          if (!j_better) continue;
          int b2 = budget;
          bool i_better = is_min ? le(flat[i], flat[j], env, b2) : le(flat[j], flat[i], env, b2);
          if (!i_better || j < i) drop[i] = true;
        }
      Expr acc;
      for (std::size_t i = 0; i < flat.size(); ++i) {
        if (drop[i]) continue;
        acc = !acc ? flat[i] : (is_min ? min(acc, flat[i]) : max(acc, flat[i]));
      }
      return acc;
    }
    case Node::Kind::Binary: {
      Expr l = simplify_rec(e->kids[0], env, budget);
      Expr r = simplify_rec(e->kids[1], env, budget);
      if (e->op == BinOp::Add || e->op == BinOp::Sub) {
        bool r_neg = e->op == BinOp::Sub;
        auto eff = [&](const Expr& x, bool negated) -> int {
          if (!x->is_inf()) return 0;
          int s = x->kind == Node::Kind::PosInf ? 1 : -1;
          return negated ? -s : s;
        };
        int sl = eff(l, false), sr = eff(r, r_neg);
        if (sl || sr) {
          if (sl && sr && sl != sr) return binary(e->op, l, r);
          int s = sl ? sl : sr;
          return s > 0 ? pos_inf() : neg_inf();
        }
      }
      if (l->is_inf() || r->is_inf()) return binary(e->op, l, r);
      if (e->op == BinOp::Div || e->op == BinOp::Mod) {
        if (l->is_const() && r->is_const() && r->value != 0)
          return constant(e->op == BinOp::Div ? c_div(l->value, r->value) : c_mod(l->value, r->value));
        if (r->is_const() && r->value == 1) return e->op == BinOp::Div ? l : constant(0);
        if (e->op == BinOp::Mod && r->is_const() && r->value == -1) return constant(0);
        return binary(e->op, l, r);
      }
      if (l->is_minmax() || r->is_minmax()) return binary(e->op, l, r);
      Expr b = binary(e->op, l, r);
      AtomTable tab;
      auto p = to_poly(b, tab);
      if (!p) return b;
      return from_poly(*p, tab);
    }
  }
  return e;
}

}  // namespace

Expr simplify(const Expr& e, const Bounds* env) {
  int budget = kCompareBudget * 4;
  try {
    return simplify_rec(e, env, budget);
  } catch (const EvalError&) {
    return e;
  }
}

std::optional<std::pair<LValue, Expr>> split_pointer(const Expr& e) {
  AtomTable tab;
  auto p = to_poly(e, tab);
  if (!p) return std::nullopt;
  auto is_ptr_atom = [&](const std::string& k) {
    const Expr& a = tab.atoms.at(k);
    return (a->kind == Node::Kind::Var || a->kind == Node::Kind::Deref) && a->lv.type() && a->lv.type()->is_pointerish();
  };
  std::optional<LValue> base;
  Poly rest;
  for (const auto& [m, c] : p->terms) {
    bool has_ptr = std::any_of(m.begin(), m.end(), is_ptr_atom);
    if (!has_ptr) {
      rest.add_term(m, c);
      continue;
    }
    if (base || m.size() != 1 || c != 1) return std::nullopt;
    base = tab.atoms.at(m[0])->lv;
  }
  if (!base) return std::nullopt;
  return std::make_pair(*base, from_poly(rest, tab));
}

std::optional<PolyView> poly_view(const Expr& e) {
  AtomTable tab;
  auto p = to_poly(e, tab);
  if (!p) return std::nullopt;
  PolyView v;
  v.constant = p->constant();
  for (const auto& [m, c] : p->terms) {
    if (m.empty()) continue;
    Monomial mo;
    mo.coef = c;
    mo.mono = mono_expr(m, tab);
    for (const auto& k : m) mo.atoms.push_back(tab.atoms.at(k));
    v.monos.push_back(std::move(mo));
  }
  return v;
}

}  // namespace ctxgen::sym
