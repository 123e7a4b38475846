#include "ctxgen/typecheck.hpp"

#include <set>

namespace ctxgen {

bool TypedSpec::is_param(const std::string& name) const {
  for (const auto& p : spec.target.params)
    if (p.name == name) return true;
  return false;
}

bool TypedSpec::is_global(const std::string& name) const {
  for (const auto& g : spec.globals)
    if (g.name == name) return true;
  return false;
}

namespace {

[[noreturn]] void type_error(Pos pos, const std::string& msg) { throw FrontendError(ErrorKind::Type, pos, msg); }

CTypePtr decay(const CTypePtr& t) { return t->is_array() ? CType::pointer(t->elem) : t; }

class Checker {
 public:
  Checker(const TypeEnv& env, const std::map<std::string, CTypePtr>& vars) : env_(env), vars_(vars) {}

  PredPtr pred(const PredPtr& p) {
    switch (p->kind) {
      case Predicate::Kind::True:
      case Predicate::Kind::False: return p;
      case Predicate::Kind::And:
      case Predicate::Kind::Or: {
        std::vector<PredPtr> kids;
        for (const auto& k : p->kids) kids.push_back(pred(k));
        return p->kind == Predicate::Kind::And ? make_and(std::move(kids), p->pos) : make_or(std::move(kids), p->pos);
      }
      case Predicate::Kind::Not: return make_not(pred(p->kids[0]), p->pos);
      case Predicate::Kind::Defined: {
        TermPtr m = term(p->mem, true);
        if (!m->type->is_pointerish())
          type_error(p->pos, std::string(spelling(p->def)) + " expects a pointer, got " + m->type->spelling());
        if (m->type->elem->kind == CType::Kind::Void)
          type_error(p->pos, std::string(spelling(p->def)) + " of a void pointer");
        return make_defined(p->def, m, p->pos);
      }
      case Predicate::Kind::Cmp: {
        TermPtr l = term(p->lhs, false);
        TermPtr r = term(p->rhs, false);
        const CType& lt = *l->type;
        const CType& rt = *r->type;
        if (lt.is_struct() || rt.is_struct()) type_error(p->pos, "comparison of aggregate values");
        if (lt.is_integer() && rt.is_integer()) return make_cmp(p->op, l, r, p->pos);
        if (lt.is_pointerish() && rt.is_pointerish()) {
          if (p->op != CmpOp::Eq && p->op != CmpOp::Ne)
            throw FrontendError(ErrorKind::Unsupported, p->pos, "ordering comparison between pointers");
          const CType& le = *lt.elem;
          const CType& re = *rt.elem;
          if (!same_type(*le.unqualified(), *re.unqualified()))
            type_error(p->pos, "comparison between incompatible pointer types '" + decay(l->type)->spelling() +
                                   "' and '" + decay(r->type)->spelling() + "'");
          if (is_range(*l) || is_range(*r))
            throw FrontendError(ErrorKind::Unsupported, p->pos, "displacement range in a pointer comparison");
          return make_cmp(p->op, l, r, p->pos);
        }
        type_error(p->pos, "comparison between pointer and integer");
      }
    }
    return p;
  }

 private:
  static bool is_range(const Term& t) {
    return t.kind == Term::Kind::Disp && !same_term(*t.kid(1), *t.kid(2));
  }

  TermPtr integer_operand(const TermPtr& raw, const std::string& what) {
    TermPtr t = term(raw, false);
    if (!t->type->is_integer()) type_error(raw->pos, what + " must be an integer, got " + t->type->spelling());
    return t;
  }

  // `in_defined`: ranges are only accepted directly under \valid and friends.
  TermPtr term(const TermPtr& t, bool in_defined) {
    switch (t->kind) {
      case Term::Kind::Const: return make_const(t->value, t->pos, CType::logic_integer());
      case Term::Kind::Var: {
        auto it = vars_.find(t->name);
        if (it == vars_.end()) type_error(t->pos, "unknown identifier '" + t->name + "'");
        return make_var(t->name, t->pos, it->second);
      }
      case Term::Kind::Field: {
        TermPtr base = term(t->kid(0), false);
        if (!base->type->is_struct())
          type_error(t->pos, "field access '" + t->name + "' on non-aggregate type " + base->type->spelling());
        if (!base->is_lvalue()) type_error(t->pos, "field access on a non-lvalue");
        CTypePtr ft = env_.field_type(base->type->name, t->name);
        if (!ft) type_error(t->pos, "unknown field '" + t->name + "' in " + base->type->name);
        if (base->type->is_const && !ft->is_const && !ft->is_array()) {
          CType q = *ft;
          q.is_const = true;
          ft = std::make_shared<CType>(q);
        }
        return make_field(base, t->name, t->pos, ft);
      }
      case Term::Kind::Deref: {
        TermPtr m = term(t->kid(0), false);
        if (!m->type->is_pointerish()) type_error(t->pos, "dereference of non-pointer type " + m->type->spelling());
        if (is_range(*m))
          throw FrontendError(ErrorKind::Unsupported, t->pos, "dereference of a displacement range outside \\valid");
        if (m->type->elem->kind == CType::Kind::Void) type_error(t->pos, "dereference of a void pointer");
        return make_deref(m, t->pos, m->type->elem);
      }
      case Term::Kind::Disp: {
        TermPtr base = term(t->kid(0), false);
        if (!base->type->is_pointerish())
          type_error(t->pos, "displacement of non-pointer type " + base->type->spelling());
        TermPtr lo = integer_operand(t->kid(1), "displacement bound");
        TermPtr hi = integer_operand(t->kid(2), "displacement bound");
        if (!in_defined && !same_term(*lo, *hi))
          throw FrontendError(ErrorKind::Unsupported, t->pos, "displacement range outside \\valid/\\initialized");
        return make_disp(base, lo, hi, t->pos, decay(base->type));
      }
      case Term::Kind::Binary: {
        TermPtr l = term(t->kid(0), in_defined);
        TermPtr r = term(t->kid(1), in_defined);
        bool lp = l->type->is_pointerish(), rp = r->type->is_pointerish();
        if (l->type->is_struct() || r->type->is_struct()) type_error(t->pos, "aggregate value in arithmetic");
        if (!lp && !rp) return make_binary(t->op, l, r, t->pos, CType::logic_integer());
        if (lp && rp) type_error(t->pos, "pointer used in arithmetic");
        if (t->op == BinOp::Add) {
          TermPtr p = lp ? l : r, i = lp ? r : l;
          if (is_range(*p)) type_error(t->pos, "arithmetic on a displacement range");
          return make_disp(p, i, i, t->pos, decay(p->type));
        }
        if (t->op == BinOp::Sub && lp) {
          if (is_range(*l)) type_error(t->pos, "arithmetic on a displacement range");
          TermPtr neg = r->is_const() ? make_const(-r->value, r->pos, CType::logic_integer())
                                      : make_binary(BinOp::Sub, make_const(0, r->pos, CType::logic_integer()), r,
                                                    r->pos, CType::logic_integer());
          return make_disp(l, neg, neg, t->pos, decay(l->type));
        }
        type_error(t->pos, "pointer used in arithmetic");
      }
    }
    return t;
  }

  const TypeEnv& env_;
  const std::map<std::string, CTypePtr>& vars_;
};

void check_kinds(const CTypePtr& t, const TargetConfig& cfg, Pos pos, const TypeEnv& env) {
  switch (t->kind) {
    case CType::Kind::Integer:
      if (!cfg.has_kind(t->name)) type_error(pos, "integer kind '" + t->name + "' unknown to the target configuration");
      break;
    case CType::Kind::Pointer:
    case CType::Kind::Array: check_kinds(t->elem, cfg, pos, env); break;
    case CType::Kind::Struct:
      if (!env.find_struct(t->name)) type_error(pos, "unknown aggregate '" + t->name + "'");
      break;
    case CType::Kind::Void: break;
  }
}

}  // namespace

TypedSpec typecheck(const SpecFile& spec, const TargetConfig& cfg) {
  TypedSpec out;
  out.env = TypeEnv(spec.typedefs, cfg);
  for (const auto& td : spec.typedefs)
    for (const auto& f : td.fields) check_kinds(f.type, cfg, td.pos, out.env);
  for (const auto& g : spec.globals) {
    check_kinds(g.type, cfg, g.pos, out.env);
    if (!out.vars.emplace(g.name, g.type).second) type_error(g.pos, "redefinition of '" + g.name + "'");
  }
  if (spec.target.return_type->kind != CType::Kind::Void)
    check_kinds(spec.target.return_type, cfg, spec.target.pos, out.env);
  for (const auto& p : spec.target.params) {
    check_kinds(p.type, cfg, p.pos, out.env);
    if (!out.vars.emplace(p.name, p.type).second)
      type_error(p.pos, "parameter '" + p.name + "' redefines another parameter or a global");
  }
  Checker ck(out.env, out.vars);
  out.spec = spec;
  std::vector<PredPtr> all;
  for (auto& rc : out.spec.requires_clauses) {
    rc.pred = ck.pred(rc.pred);
    all.push_back(rc.pred);
  }
  out.precondition = all.empty() ? make_bool(true) : all.size() == 1 ? all[0] : make_and(all);
  return out;
}

}  // namespace ctxgen
