#include "ctxgen/ir.hpp"

#include <map>
#include <set>
#include <sstream>

namespace ctxgen::ir {

namespace {
ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }
ExprPtr with_kids(Expr::Kind k, std::vector<ExprPtr> kids) {
  Expr e;
  e.kind = k;
  e.kids = std::move(kids);
  return node(std::move(e));
}
}  // namespace

ExprPtr constant(const Int& v) {
  Expr e;
  e.kind = Expr::Kind::Const;
  e.value = v;
  return node(std::move(e));
}

ExprPtr var(const std::string& name) {
  Expr e;
  e.kind = Expr::Kind::Var;
  e.name = name;
  return node(std::move(e));
}

ExprPtr index(ExprPtr base, ExprPtr i) {
  // (&x)[0] is x
  if (base->kind == Expr::Kind::AddrOf && i->kind == Expr::Kind::Const && i->value == 0) return base->kids[0];
  return with_kids(Expr::Kind::Index, {std::move(base), std::move(i)});
}

ExprPtr field(ExprPtr base, const std::string& name) {
  Expr e;
  e.kind = Expr::Kind::Field;
  e.name = name;
  e.kids = {std::move(base)};
  return node(std::move(e));
}

ExprPtr addr_of(ExprPtr lv) { return with_kids(Expr::Kind::AddrOf, {std::move(lv)}); }

ExprPtr ptr_add(ExprPtr p, ExprPtr k) {
  if (k->kind == Expr::Kind::Const && k->value == 0) return p;
  return with_kids(Expr::Kind::PtrAdd, {std::move(p), std::move(k)});
}

ExprPtr binary(BinOp op, ExprPtr a, ExprPtr b) {
  Expr e;
  e.kind = Expr::Kind::Binary;
  e.op = op;
  e.kids = {std::move(a), std::move(b)};
  return node(std::move(e));
}

ExprPtr min(ExprPtr a, ExprPtr b) { return with_kids(Expr::Kind::Min, {std::move(a), std::move(b)}); }
ExprPtr max(ExprPtr a, ExprPtr b) { return with_kids(Expr::Kind::Max, {std::move(a), std::move(b)}); }

ExprPtr cmp(CmpOp op, ExprPtr a, ExprPtr b) {
  Expr e;
  e.kind = Expr::Kind::Cmp;
  e.cmp = op;
  e.kids = {std::move(a), std::move(b)};
  return node(std::move(e));
}

ExprPtr conj(std::vector<ExprPtr> kids) {
  if (kids.size() == 1) return kids[0];
  return with_kids(Expr::Kind::And, std::move(kids));
}

ExprPtr disj(std::vector<ExprPtr> kids) {
  if (kids.size() == 1) return kids[0];
  return with_kids(Expr::Kind::Or, std::move(kids));
}

ExprPtr null() {
  Expr e;
  e.kind = Expr::Kind::Null;
  return node(std::move(e));
}

namespace {

// Precedence levels: 1 ||, 2 &&, 3 comparison, 4 additive, 5 multiplicative,
// 6 unary/postfix/primary.
int level(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Or: return 1;
    case Expr::Kind::And: return 2;
    case Expr::Kind::Cmp: return 3;
    case Expr::Kind::PtrAdd: return 4;
    case Expr::Kind::Binary: return (e.op == BinOp::Add || e.op == BinOp::Sub) ? 4 : 5;
    case Expr::Kind::Min:
    case Expr::Kind::Max: return 6;  // printed parenthesized
    case Expr::Kind::Const: return e.value < 0 ? 5 : 6;
    default: return 6;
  }
}

std::string wrap(const ExprPtr& e, int min_level) {
  std::string s = render(e);
  return level(*e) < min_level ? "(" + s + ")" : s;
}

}  // namespace

std::string render(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Const: return to_string(e->value);
    case Expr::Kind::Var: return e->name;
    case Expr::Kind::Null: return "0";
    case Expr::Kind::Index: return wrap(e->kids[0], 6) + "[" + render(e->kids[1]) + "]";
    case Expr::Kind::Field: return wrap(e->kids[0], 6) + "." + e->name;
    case Expr::Kind::AddrOf: return "&" + wrap(e->kids[0], 6);
    case Expr::Kind::PtrAdd: return wrap(e->kids[0], 4) + " + " + wrap(e->kids[1], 5);
    case Expr::Kind::Binary: {
      int l = level(*e);
      return wrap(e->kids[0], l) + " " + spelling(e->op) + " " + wrap(e->kids[1], l + 1);
    }
    case Expr::Kind::Min:
    case Expr::Kind::Max: {
      std::string a = wrap(e->kids[0], 4), b = wrap(e->kids[1], 4);
      return "(" + a + (e->kind == Expr::Kind::Min ? " <= " : " >= ") + b + " ? " + a + " : " + b + ")";
    }
    case Expr::Kind::Cmp: return wrap(e->kids[0], 4) + " " + spelling(e->cmp) + " " + wrap(e->kids[1], 4);
    case Expr::Kind::And:
    case Expr::Kind::Or: {
      std::string s;
      int l = level(*e);
      for (std::size_t i = 0; i < e->kids.size(); ++i)
        s += (i ? (e->kind == Expr::Kind::And ? " && " : " || ") : "") + wrap(e->kids[i], l + 1);
      return s;
    }
  }
  return "?";
}

Stmt assign(ExprPtr lhs, ExprPtr rhs) {
  Stmt s;
  s.kind = Stmt::Kind::Assign;
  s.lhs = std::move(lhs);
  s.a = std::move(rhs);
  return s;
}

Stmt range_init(ExprPtr lhs, const std::string& int_kind, ExprPtr lo, ExprPtr hi) {
  Stmt s;
  s.kind = Stmt::Kind::RangeInit;
  s.lhs = std::move(lhs);
  s.int_kind = int_kind;
  s.a = std::move(lo);
  s.b = std::move(hi);
  return s;
}

Stmt make_unknown(ExprPtr region, ExprPtr bytes, CTypePtr elem) {
  Stmt s;
  s.kind = Stmt::Kind::MakeUnknown;
  s.a = std::move(region);
  s.b = std::move(bytes);
  s.elem = std::move(elem);
  return s;
}

Stmt alloc(ExprPtr lhs, CTypePtr elem, ExprPtr count) {
  Stmt s;
  s.kind = Stmt::Kind::Alloc;
  s.lhs = std::move(lhs);
  s.elem = std::move(elem);
  s.a = std::move(count);
  return s;
}

Stmt guard(ExprPtr cond, Block body) {
  Stmt s;
  s.kind = Stmt::Kind::Guard;
  s.cond = std::move(cond);
  s.bodies.push_back(std::move(body));
  return s;
}

Stmt switch_on(ExprPtr scrutinee, std::vector<Block> cases, int first_case) {
  Stmt s;
  s.kind = Stmt::Kind::Switch;
  s.a = std::move(scrutinee);
  s.bodies = std::move(cases);
  s.first_case = first_case;
  return s;
}

Stmt call(const std::string& callee, std::vector<ExprPtr> args) {
  Stmt s;
  s.kind = Stmt::Kind::Call;
  s.callee = callee;
  s.args = std::move(args);
  return s;
}

std::string dump(const Block& b, int indent) {
  std::ostringstream os;
  std::string pad(indent * 2, ' ');
  for (const auto& s : b) {
    switch (s.kind) {
      case Stmt::Kind::Assign: os << pad << "assign " << render(s.lhs) << " = " << render(s.a) << "\n"; break;
      case Stmt::Kind::RangeInit:
        os << pad << "range_init " << render(s.lhs) << " : " << s.int_kind << " [" << render(s.a) << "; "
           << render(s.b) << "]\n";
        break;
      case Stmt::Kind::MakeUnknown:
        os << pad << "make_unknown " << render(s.a) << " bytes " << render(s.b) << "\n";
        break;
      case Stmt::Kind::Alloc:
        os << pad << "alloc " << render(s.lhs) << " : " << s.elem->spelling() << " x " << render(s.a) << "\n";
        break;
      case Stmt::Kind::Guard:
        os << pad << "guard " << render(s.cond) << "\n" << dump(s.bodies[0], indent + 1);
        break;
      case Stmt::Kind::Switch:
        os << pad << "switch " << render(s.a) << "\n";
        for (std::size_t i = 0; i < s.bodies.size(); ++i)
          os << pad << "  case " << (s.first_case + static_cast<int>(i)) << "\n" << dump(s.bodies[i], indent + 2);
        break;
      case Stmt::Kind::Call: {
        os << pad << "call " << s.callee << "(";
        for (std::size_t i = 0; i < s.args.size(); ++i) os << (i ? ", " : "") << render(s.args[i]);
        os << ")\n";
        break;
      }
    }
  }
  return os.str();
}

std::string dump(const Program& p) {
  std::ostringstream os;
  os << "driver " << p.driver_name << " -> " << p.target << "\n";
  for (const auto& d : p.decls) os << "  decl " << d.type->declare(d.name) << "\n";
  os << dump(p.body, 1);
  return os.str();
}

// ---------------------------------------------------------------- checks

namespace {

struct Checker {
  std::map<std::string, CTypePtr> types;  // declared locals and globals
  std::vector<std::string> errors;

  // Storage that may be used as an address without being assigned first.
  bool is_storage(const ExprPtr& e) const {
    if (e->kind == Expr::Kind::Var) {
      auto it = types.find(e->name);
      return it != types.end() && (it->second->is_array() || it->second->is_struct());
    }
    if (e->kind == Expr::Kind::Field) return true;  // array field or member of a storage object
    if (e->kind == Expr::Kind::Index) return false;
    return false;
  }

  void reads(const ExprPtr& e, const std::set<std::string>& init, const std::string& where) {
    switch (e->kind) {
      case Expr::Kind::Const:
      case Expr::Kind::Null: return;
      case Expr::Kind::Var:
        if (!types.count(e->name)) errors.push_back(where + ": undeclared " + e->name);
        else if (!is_storage(e) && !init.count(render(e)))
          errors.push_back(where + ": " + e->name + " read before initialization");
        return;
      case Expr::Kind::AddrOf: lvalue_parts(e->kids[0], init, where); return;
      case Expr::Kind::Field:
        lvalue_parts(e, init, where);
        return;
      case Expr::Kind::Index:
        lvalue_parts(e, init, where);
        if (!init.count(render(e))) errors.push_back(where + ": " + render(e) + " read before initialization");
        return;
      default:
        for (const auto& k : e->kids) reads(k, init, where);
    }
  }

  // Sub-expressions evaluated to locate an lvalue.
  void lvalue_parts(const ExprPtr& e, const std::set<std::string>& init, const std::string& where) {
    switch (e->kind) {
      case Expr::Kind::Var:
        if (!types.count(e->name)) errors.push_back(where + ": undeclared " + e->name);
        return;
      case Expr::Kind::Field: lvalue_parts(e->kids[0], init, where); return;
      case Expr::Kind::Index:
        reads(e->kids[0], init, where);
        reads(e->kids[1], init, where);
        return;
      default: reads(e, init, where);
    }
  }

  // Returns whether every path through `b` ends with exactly one call.
  bool block(const Block& b, std::set<std::string> init) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      const Stmt& s = b[i];
      bool last = i + 1 == b.size();
      switch (s.kind) {
        case Stmt::Kind::Assign:
          reads(s.a, init, "assign");
          lvalue_parts(s.lhs, init, "assign");
          init.insert(render(s.lhs));
          break;
        case Stmt::Kind::RangeInit:
          reads(s.a, init, "range_init");
          reads(s.b, init, "range_init");
          lvalue_parts(s.lhs, init, "range_init");
          init.insert(render(s.lhs));
          break;
        case Stmt::Kind::MakeUnknown:
          reads(s.a, init, "make_unknown");
          reads(s.b, init, "make_unknown");
          break;
        case Stmt::Kind::Alloc: {
          reads(s.a, init, "alloc");
          lvalue_parts(s.lhs, init, "alloc");
          init.insert(render(s.lhs));
          bool guarded = !last && b[i + 1].kind == Stmt::Kind::Guard && b[i + 1].cond->kind == Expr::Kind::Cmp &&
                         b[i + 1].cond->cmp == CmpOp::Ne && render(b[i + 1].cond->kids[0]) == render(s.lhs) &&
                         b[i + 1].cond->kids[1]->kind == Expr::Kind::Null;
          if (!guarded) errors.push_back("alloc of " + render(s.lhs) + " is not followed by a null guard");
          break;
        }
        case Stmt::Kind::Guard:
          reads(s.cond, init, "guard");
          if (!last) {
            errors.push_back("statements after a guard");
            return false;
          }
          return block(s.bodies[0], init);
        case Stmt::Kind::Switch: {
          reads(s.a, init, "switch");
          if (!last) {
            errors.push_back("statements after a switch");
            return false;
          }
          bool ok = true;
          for (const auto& c : s.bodies) ok = block(c, init) && ok;
          return ok;
        }
        case Stmt::Kind::Call:
          for (const auto& a : s.args) reads(a, init, "call");
          if (!last) {
            errors.push_back("statements after the call");
            return false;
          }
          return true;
      }
    }
    errors.push_back("path without a call to the target");
    return false;
  }
};

}  // namespace

std::vector<std::string> check_well_formed(const Program& p) {
  Checker c;
  for (const auto& d : p.globals) c.types[d.name] = d.type;
  for (const auto& d : p.decls) c.types[d.name] = d.type;
  std::set<std::string> init;
  // globals hold their values on entry
  for (const auto& d : p.globals) init.insert(d.name);
  c.block(p.body, init);
  return c.errors;
}

}  // namespace ctxgen::ir
