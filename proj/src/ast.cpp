#include "ctxgen/ast.hpp"

#include <set>

namespace ctxgen {

const char* spelling(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
  }
  return "?";
}

const char* spelling(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Le: return "<=";
    case CmpOp::Lt: return "<";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

const char* spelling(DefKind k) {
  switch (k) {
    case DefKind::ValidWrite: return "\\valid";
    case DefKind::ValidRead: return "\\valid_read";
    case DefKind::Initialized: return "\\initialized";
  }
  return "?";
}

CmpOp flip(CmpOp op) {
  switch (op) {
    case CmpOp::Le: return CmpOp::Ge;
    case CmpOp::Lt: return CmpOp::Gt;
    case CmpOp::Ge: return CmpOp::Le;
    case CmpOp::Gt: return CmpOp::Lt;
    default: return op;
  }
}

namespace {
TermPtr finish(Term t, Pos pos, CTypePtr type) {
  t.pos = pos;
  t.type = std::move(type);
  return std::make_shared<const Term>(std::move(t));
}
}  // namespace

TermPtr make_const(Int v, Pos pos, CTypePtr type) {
  Term t;
  t.kind = Term::Kind::Const;
  t.value = std::move(v);
  return finish(std::move(t), pos, std::move(type));
}

TermPtr make_var(std::string name, Pos pos, CTypePtr type) {
  Term t;
  t.kind = Term::Kind::Var;
  t.name = std::move(name);
  return finish(std::move(t), pos, std::move(type));
}

TermPtr make_deref(TermPtr m, Pos pos, CTypePtr type) {
  Term t;
  t.kind = Term::Kind::Deref;
  t.kids = {std::move(m)};
  return finish(std::move(t), pos, std::move(type));
}

TermPtr make_field(TermPtr base, std::string field, Pos pos, CTypePtr type) {
  Term t;
  t.kind = Term::Kind::Field;
  t.name = std::move(field);
  t.kids = {std::move(base)};
  return finish(std::move(t), pos, std::move(type));
}

TermPtr make_disp(TermPtr base, TermPtr lo, TermPtr hi, Pos pos, CTypePtr type) {
  Term t;
  t.kind = Term::Kind::Disp;
  t.kids = {std::move(base), std::move(lo), std::move(hi)};
  return finish(std::move(t), pos, std::move(type));
}

TermPtr make_binary(BinOp op, TermPtr l, TermPtr r, Pos pos, CTypePtr type) {
  Term t;
  t.kind = Term::Kind::Binary;
  t.op = op;
  t.kids = {std::move(l), std::move(r)};
  return finish(std::move(t), pos, std::move(type));
}

namespace {

int prec(const Term& t) {
  if (t.kind != Term::Kind::Binary) return 3;
  return (t.op == BinOp::Add || t.op == BinOp::Sub) ? 1 : 2;
}

std::string postfix_operand(const Term& t) {
  std::string s = render(t);
  if (t.kind == Term::Kind::Var || t.kind == Term::Kind::Field ||
      (t.kind == Term::Kind::Deref && t.kid(0)->kind == Term::Kind::Disp && same_term(*t.kid(0)->kid(1), *t.kid(0)->kid(2))))
    return s;
  return "(" + s + ")";
}

bool is_index(const Term& m) { return m.kind == Term::Kind::Disp && same_term(*m.kid(1), *m.kid(2)); }

}  // namespace

std::string render(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Const: return to_string(t.value);
    case Term::Kind::Var: return t.name;
    case Term::Kind::Deref: {
      const Term& m = *t.kid(0);
      if (is_index(m)) return postfix_operand(*m.kid(0)) + "[" + render(*m.kid(1)) + "]";
      if (m.kind == Term::Kind::Var || m.kind == Term::Kind::Deref) return "*" + render(m);
      return "*(" + render(m) + ")";
    }
    case Term::Kind::Field: {
      const Term& b = *t.kid(0);
      if (b.kind == Term::Kind::Deref && !is_index(*b.kid(0))) return postfix_operand(*b.kid(0)) + "->" + t.name;
      return postfix_operand(b) + "." + t.name;
    }
    case Term::Kind::Disp: {
      std::string base = render(*t.kid(0));
      if (same_term(*t.kid(1), *t.kid(2))) return "(" + base + " + " + render(*t.kid(1)) + ")";
      return "(" + base + " + (" + render(*t.kid(1)) + " .. " + render(*t.kid(2)) + "))";
    }
    case Term::Kind::Binary: {
      const Term& l = *t.kid(0);
      const Term& r = *t.kid(1);
      int p = prec(t);
      std::string ls = render(l), rs = render(r);
      if (prec(l) < p) ls = "(" + ls + ")";
      if (prec(r) <= p) rs = "(" + rs + ")";
      return ls + " " + spelling(t.op) + " " + rs;
    }
  }
  return "?";
}

bool same_term(const Term& a, const Term& b) {
  if (a.kind != b.kind || a.kids.size() != b.kids.size()) return false;
  switch (a.kind) {
    case Term::Kind::Const:
      if (a.value != b.value) return false;
      break;
    case Term::Kind::Var:
    case Term::Kind::Field:
      if (a.name != b.name) return false;
      break;
    case Term::Kind::Binary:
      if (a.op != b.op) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!same_term(*a.kids[i], *b.kids[i])) return false;
  return true;
}

LValue::LValue(TermPtr term) : term_(std::move(term)), key_(render(*term_)) {}

namespace {
void collect(const TermPtr& t, std::vector<LValue>& out, std::set<std::string>& seen) {
  for (const auto& k : t->kids) collect(k, out, seen);
  if (!t->is_lvalue()) return;
  if (t->type && t->type->is_struct()) return;
  LValue lv(t);
  if (seen.insert(lv.key()).second) out.push_back(std::move(lv));
}
}  // namespace

std::vector<LValue> lvalues_of(const TermPtr& t) {
  std::vector<LValue> out;
  std::set<std::string> seen;
  collect(t, out, seen);
  return out;
}

PredPtr make_bool(bool v, Pos pos) {
  Predicate p;
  p.kind = v ? Predicate::Kind::True : Predicate::Kind::False;
  p.pos = pos;
  return std::make_shared<const Predicate>(std::move(p));
}

PredPtr make_cmp(CmpOp op, TermPtr l, TermPtr r, Pos pos) {
  Predicate p;
  p.kind = Predicate::Kind::Cmp;
  p.op = op;
  p.lhs = std::move(l);
  p.rhs = std::move(r);
  p.pos = pos;
  return std::make_shared<const Predicate>(std::move(p));
}

PredPtr make_defined(DefKind k, TermPtr m, Pos pos) {
  Predicate p;
  p.kind = Predicate::Kind::Defined;
  p.def = k;
  p.mem = std::move(m);
  p.pos = pos;
  return std::make_shared<const Predicate>(std::move(p));
}

PredPtr make_and(std::vector<PredPtr> kids, Pos pos) {
  Predicate p;
  p.kind = Predicate::Kind::And;
  p.kids = std::move(kids);
  p.pos = pos;
  return std::make_shared<const Predicate>(std::move(p));
}

PredPtr make_or(std::vector<PredPtr> kids, Pos pos) {
  Predicate p;
  p.kind = Predicate::Kind::Or;
  p.kids = std::move(kids);
  p.pos = pos;
  return std::make_shared<const Predicate>(std::move(p));
}

PredPtr make_not(PredPtr q, Pos pos) {
  Predicate p;
  p.kind = Predicate::Kind::Not;
  p.kids = {std::move(q)};
  p.pos = pos;
  return std::make_shared<const Predicate>(std::move(p));
}

namespace {
// Memory values inside \valid(...) print without the outer parentheses of a
// displacement.
std::string render_mem(const Term& m) {
  if (m.kind != Term::Kind::Disp) return render(m);
  std::string s = render(m);
  return s.substr(1, s.size() - 2);
}

std::string render_conn(const Predicate& p, Predicate::Kind parent) {
  std::string s = render(p);
  bool wrap = (p.kind == Predicate::Kind::And || p.kind == Predicate::Kind::Or) && p.kids.size() > 1;
  if (parent == Predicate::Kind::Not) wrap = p.kind != Predicate::Kind::Defined;
  if (p.kind == Predicate::Kind::And && parent == Predicate::Kind::Or) wrap = false;
  return wrap ? "(" + s + ")" : s;
}
}  // namespace

std::string render(const Predicate& p) {
  switch (p.kind) {
    case Predicate::Kind::True: return "\\true";
    case Predicate::Kind::False: return "\\false";
    case Predicate::Kind::Cmp: return render(*p.lhs) + " " + spelling(p.op) + " " + render(*p.rhs);
    case Predicate::Kind::Defined: return std::string(spelling(p.def)) + "(" + render_mem(*p.mem) + ")";
    case Predicate::Kind::Not: return "!" + render_conn(*p.kids[0], p.kind);
    case Predicate::Kind::And:
    case Predicate::Kind::Or: {
      const char* sep = p.kind == Predicate::Kind::And ? " && " : " || ";
      std::string s;
      for (std::size_t i = 0; i < p.kids.size(); ++i) {
        if (i) s += sep;
        s += render_conn(*p.kids[i], p.kind);
      }
      return s;
    }
  }
  return "?";
}

bool same_pred(const Predicate& a, const Predicate& b) {
  if (a.kind != b.kind || a.kids.size() != b.kids.size()) return false;
  switch (a.kind) {
    case Predicate::Kind::Cmp:
      if (a.op != b.op || !same_term(*a.lhs, *b.lhs) || !same_term(*a.rhs, *b.rhs)) return false;
      break;
    case Predicate::Kind::Defined:
      if (a.def != b.def || !same_term(*a.mem, *b.mem)) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!same_pred(*a.kids[i], *b.kids[i])) return false;
  return true;
}

namespace {
bool same_type_ptr(const CTypePtr& a, const CTypePtr& b) {
  if (!a || !b) return !a && !b;
  return same_type(*a, *b);
}

bool same_vars(const std::vector<VarDecl>& a, const std::vector<VarDecl>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].name != b[i].name || !same_type_ptr(a[i].type, b[i].type)) return false;
  return true;
}
}  // namespace

bool same_spec(const SpecFile& a, const SpecFile& b) {
  if (a.typedefs.size() != b.typedefs.size() || a.aliases != b.aliases) return false;
  for (std::size_t i = 0; i < a.typedefs.size(); ++i) {
    const auto& x = a.typedefs[i];
    const auto& y = b.typedefs[i];
    if (x.name != y.name || x.fields.size() != y.fields.size()) return false;
    for (std::size_t j = 0; j < x.fields.size(); ++j)
      if (x.fields[j].name != y.fields[j].name || !same_type_ptr(x.fields[j].type, y.fields[j].type)) return false;
  }
  if (!same_vars(a.globals, b.globals)) return false;
  if (a.target.name != b.target.name || !same_type_ptr(a.target.return_type, b.target.return_type) ||
      !same_vars(a.target.params, b.target.params))
    return false;
  if (a.requires_clauses.size() != b.requires_clauses.size()) return false;
  for (std::size_t i = 0; i < a.requires_clauses.size(); ++i) {
    const auto& x = a.requires_clauses[i];
    const auto& y = b.requires_clauses[i];
    if (x.label != y.label || !same_pred(*x.pred, *y.pred)) return false;
  }
  return true;
}

}  // namespace ctxgen
