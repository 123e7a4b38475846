#include "ctxgen/codegen.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ctxgen {

// ------------------------------------------------------------------ order

std::vector<LValue> order_lvalues(const SigmaMap& sigma, const DepGraph& graph, const std::vector<LValue>& mentions) {
  std::vector<LValue> nodes;
  std::set<std::string> seen;
  for (const auto& [l, c] : sigma.entries())
    if (seen.insert(l.key()).second) nodes.push_back(l);
  for (const auto& l : graph.nodes())
    if (seen.insert(l.key()).second) nodes.push_back(l);

  std::map<std::string, std::size_t> rank;
  for (std::size_t i = 0; i < mentions.size(); ++i) rank.emplace(mentions[i].key(), i);
  for (std::size_t i = 0; i < nodes.size(); ++i) rank.emplace(nodes[i].key(), mentions.size() + i);

  auto has_checks = [&](const LValue& l) {
    const StateConstraint* c = sigma.find(l);
    return c && !c->checks.empty();
  };

  std::vector<LValue> out;
  std::set<std::string> done;
  while (out.size() < nodes.size()) {
    const LValue* best = nullptr;
    for (const auto& l : nodes) {
      if (done.count(l.key())) continue;
      bool ready = true;
      for (const auto& d : graph.deps(l))
        if (!done.count(d.key())) ready = false;
      if (!ready) continue;
      if (!best) {
        best = &l;
        continue;
      }
      bool ca = has_checks(l), cb = has_checks(*best);
      if (ca != cb ? ca : rank[l.key()] < rank[best->key()]) best = &l;
    }
    if (!best) throw std::logic_error("dependency graph has a cycle");
    done.insert(best->key());
    out.push_back(*best);
  }
  return out;
}

// ---------------------------------------------------------------- helpers

namespace {

std::string mangle(const std::string& s) {
  std::string out;
  for (char ch : s) {
    bool word = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
    if (word) out += ch;
    else if (!out.empty() && out.back() != '_') out += '_';
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "v" : out;
}

/// Hands out driver-local names. The same (role, base, type) always gets the
/// same name so that fragments of different clauses can be compared as text.
class Namer {
 public:
  explicit Namer(std::set<std::string> taken) : taken_(std::move(taken)) {}

  std::string get(const std::string& role, const std::string& base, const CTypePtr& t) {
    std::string k = role + "|" + base + "|" + t->spelling();
    auto it = by_key_.find(k);
    if (it != by_key_.end()) return it->second;
    std::string n = base;
    for (int i = 1; taken_.count(n); ++i) n = base + "_" + std::to_string(i);
    taken_.insert(n);
    by_key_[k] = n;
    decls_.push_back({n, t});
    return n;
  }

  const std::vector<ir::Decl>& decls() const { return decls_; }

 private:
  std::set<std::string> taken_;
  std::map<std::string, std::string> by_key_;
  std::vector<ir::Decl> decls_;
};

CTypePtr storage_elem(const CTypePtr& pointee) {
  if (pointee->kind == CType::Kind::Void) return CType::integer("char");
  return pointee->unqualified();
}

/// One left-value's share of the driver: statements and guards, where a
/// guard wraps everything that follows it.
struct Item {
  bool is_guard = false;
  ir::Stmt stmt;
  ir::ExprPtr cond;
};

struct Fragment {
  LValue lv;
  std::vector<LValue> deps;
  std::vector<Item> items;

  std::string text() const {
    std::string s;
    for (const auto& it : items) s += it.is_guard ? "guard " + ir::render(it.cond) + "\n" : ir::dump(ir::Block{it.stmt});
    return s;
  }
};

ir::Block assemble(const std::vector<const Fragment*>& frags, ir::Block tail) {
  ir::Block body = std::move(tail);
  for (auto f = frags.rbegin(); f != frags.rend(); ++f) {
    for (auto it = (*f)->items.rbegin(); it != (*f)->items.rend(); ++it) {
      if (it->is_guard) body = ir::Block{ir::guard(it->cond, std::move(body))};
      else body.insert(body.begin(), it->stmt);
    }
  }
  return body;
}

enum class PtrPlan { Alias, ObjectParam, Stack, Heap, OnePastEnd };

struct Plan {
  PtrPlan kind = PtrPlan::OnePastEnd;
  Int h;  // last cell for ObjectParam / Stack
};

class ClauseGen {
 public:
  ClauseGen(const TypedSpec& spec, const InferenceResult& r, Namer& names)
      : spec_(spec), r_(r), names_(names), cfg_(spec.env.config()) {
    for (const auto& [l, c] : r_.sigma.entries()) {
      const auto& t = c.ctype;
      if (t->is_integer() && cfg_.has_kind(t->name))
        env_.by_key[l.key()] = sym::Interval{cfg_.min_of(t->name), cfg_.max_of(t->name)};
      if (t->is_pointer()) plans_[l.key()] = plan_for(l, c);
    }
    for (const auto& p : spec_.spec.target.params)
      if (p.type->is_pointer() && !plans_.count(p.name)) plans_[p.name] = Plan{};
  }

  std::vector<Fragment> fragments() {
    std::vector<Fragment> out;
    for (const auto& l : order_lvalues(r_.sigma, r_.graph, r_.mentions)) {
      const StateConstraint* c = r_.sigma.find(l);
      if (!c) continue;
      out.push_back(fragment(l, *c));
    }
    for (const auto& p : spec_.spec.target.params) {
      LValue l(make_var(p.name, {}, p.type));
      if (r_.sigma.contains(l) || !p.type->is_integer()) continue;
      Fragment f{l, {}, {}};
      const std::string& k = p.type->name;
      f.items.push_back({false,
                         ir::range_init(lvalue_expr(l), k, ir::constant(cfg_.min_of(k)), ir::constant(cfg_.max_of(k))),
                         nullptr});
      out.push_back(std::move(f));
    }
    return out;
  }

  ir::Stmt call() {
    std::vector<ir::ExprPtr> args;
    for (const auto& p : spec_.spec.target.params) {
      LValue l(make_var(p.name, {}, p.type));
      args.push_back(p.type->is_pointer() ? value_of(l) : lvalue_expr(l));
    }
    return ir::call(spec_.spec.target.name, std::move(args));
  }

 private:
  bool is_param_var(const LValue& l) const {
    return l.term()->kind == Term::Kind::Var && spec_.is_param(l.term()->name);
  }

  Plan plan_for(const LValue& l, const StateConstraint& c) const {
    if (c.range.is_empty()) return Plan{};
    if (alias_of(c)) return Plan{PtrPlan::Alias, 0};
    const sym::Expr& hi = c.range.hi();
    if (!hi->is_const()) return Plan{PtrPlan::Heap, 0};
    if (hi->value < 0) return Plan{};
    return Plan{is_param_var(l) ? PtrPlan::ObjectParam : PtrPlan::Stack, hi->value};
  }

  std::string prefixed(const std::string& s) const { return cfg_.prefix + s; }

  std::string param_name(const std::string& name, const CTypePtr& t) {
    CTypePtr dt = t->is_pointer() ? CType::pointer(storage_elem(t->elem)) : t->is_array() ? t : t->unqualified();
    return names_.get("var", prefixed(name), dt);
  }

  std::string object_name(const LValue& l, const Plan& p) {
    CTypePtr elem = storage_elem(l.type()->elem);
    CTypePtr t = p.h == 0 ? elem : CType::array(elem, static_cast<std::int64_t>(p.h + 1));
    return names_.get("obj", prefixed(l.term()->name), t);
  }

  std::string storage_name(const LValue& l, const std::string& suffix, std::int64_t cells) {
    CTypePtr t = CType::array(storage_elem(l.type()->elem), cells);
    return names_.get("store", prefixed(mangle(l.key())) + suffix, t);
  }

  ir::ExprPtr lvalue_expr(const LValue& l) {
    const Term& t = *l.term();
    switch (t.kind) {
      case Term::Kind::Var:
        if (spec_.is_param(t.name)) return ir::var(param_name(t.name, t.type));
        return ir::var(t.name);
      case Term::Kind::Deref: {
        const TermPtr& m = t.kid(0);
        return ir::index(value_of(tbase(m)), to_ir(sym::simplify(sym::from_term(toffset(m)))));
      }
      case Term::Kind::Field: return ir::field(lvalue_expr(LValue(t.kid(0))), t.name);
      default: throw std::logic_error("not a left-value: " + l.key());
    }
  }

  ir::ExprPtr value_of(const LValue& l) {
    if (!l.type()->is_pointer()) return lvalue_expr(l);
    auto it = plans_.find(l.key());
    if (it != plans_.end() && is_param_var(l)) {
      const Plan& p = it->second;
      if (p.kind == PtrPlan::ObjectParam) {
        ir::ExprPtr obj = ir::var(object_name(l, p));
        return p.h == 0 ? ir::addr_of(obj) : obj;
      }
      if (p.kind == PtrPlan::OnePastEnd) return ir::ptr_add(ir::var(storage_name(l, "_end", 1)), ir::constant(1));
    }
    return lvalue_expr(l);
  }

  ir::ExprPtr to_ir(const sym::Expr& e) {
    using K = sym::Node::Kind;
    switch (e->kind) {
      case K::Const: return ir::constant(e->value);
      case K::Var:
      case K::Deref: return value_of(e->lv);
      case K::Binary: return ir::binary(e->op, to_ir(e->kids[0]), to_ir(e->kids[1]));
      case K::Min: return ir::min(to_ir(e->kids[0]), to_ir(e->kids[1]));
      case K::Max: return ir::max(to_ir(e->kids[0]), to_ir(e->kids[1]));
      case K::NegInf:
      case K::PosInf: break;
    }
    throw std::logic_error("infinite bound in generated code: " + sym::render(e));
  }

  // Non-negative cell count `e`, wrapped in max(., 0) unless provable.
  sym::Expr count_of(const sym::Expr& e) {
    sym::Expr n = sym::simplify(e, &env_);
    if (sym::proves_le(sym::constant(0), n, &env_)) return n;
    return sym::max(n, sym::constant(0));
  }

  std::int64_t width(const CTypePtr& pointee) const {
    return pointee->kind == CType::Kind::Void ? 1 : spec_.env.size_of(*pointee);
  }

  void add_init(Fragment& f, const StateConstraint& c, const ir::ExprPtr& region) {
    if (c.init.is_empty()) return;
    CTypePtr elem = c.ctype->elem;
    sym::Expr cells = count_of(sym::add(c.init.hi(), sym::constant(1)));
    sym::Expr bytes = sym::simplify(sym::mul(cells, sym::constant(width(elem))), &env_);
    f.items.push_back({false, ir::make_unknown(region, to_ir(bytes), storage_elem(elem)), nullptr});
  }

  void add_checks(Fragment& f, const StateConstraint& c) {
    std::vector<ir::ExprPtr> conj;
    for (const auto& rc : c.checks) {
      std::vector<ir::ExprPtr> disj;
      for (const auto& a : rc.atoms) disj.push_back(ir::cmp(a.op, to_ir(a.lhs), to_ir(a.rhs)));
      conj.push_back(ir::disj(std::move(disj)));
    }
    if (!conj.empty()) f.items.push_back({true, {}, ir::conj(std::move(conj))});
  }

  void integer_fragment(Fragment& f, const LValue& l, const StateConstraint& c) {
    const std::string& k = c.ctype->name;
    sym::Expr kmin = sym::constant(cfg_.min_of(k)), kmax = sym::constant(cfg_.max_of(k));
    ir::ExprPtr lhs = lvalue_expr(l);
    const SymRange& r = c.range;
    if (r.is_empty()) throw std::logic_error("empty integer range for " + l.key());
    if (!r.lo()->is_inf() && sym::same(r.lo(), r.hi())) {
      sym::Expr v = r.lo();
      std::vector<ir::ExprPtr> in_kind;
      if (!sym::proves_le(kmin, v, &env_)) in_kind.push_back(ir::cmp(CmpOp::Le, to_ir(kmin), to_ir(v)));
      if (!sym::proves_le(v, kmax, &env_)) in_kind.push_back(ir::cmp(CmpOp::Le, to_ir(v), to_ir(kmax)));
      if (!in_kind.empty()) f.items.push_back({true, {}, ir::conj(std::move(in_kind))});
      f.items.push_back({false, ir::assign(lhs, to_ir(v)), nullptr});
    } else {
      auto clamp = [&](const sym::Expr& b, const sym::Expr& kb, bool low) {
        if (b->is_inf()) return kb;
        if (low ? sym::proves_le(kb, b, &env_) : sym::proves_le(b, kb, &env_)) return b;
        if (b->is_const()) return kb;
        return low ? sym::max(b, kb) : sym::min(b, kb);
      };
      sym::Expr lo = clamp(r.lo(), kmin, true), hi = clamp(r.hi(), kmax, false);
      if (!sym::proves_le(lo, hi, &env_)) f.items.push_back({true, {}, ir::cmp(CmpOp::Le, to_ir(lo), to_ir(hi))});
      f.items.push_back({false, ir::range_init(lhs, k, to_ir(lo), to_ir(hi)), nullptr});
    }
    // From here on the value is known to lie in the range.
    sym::Interval iv = env_.by_key[l.key()];
    if (!r.lo()->is_inf()) iv = iv.meet(sym::Interval{sym::interval_of(r.lo(), &env_).lo, std::nullopt});
    if (!r.hi()->is_inf()) iv = iv.meet(sym::Interval{std::nullopt, sym::interval_of(r.hi(), &env_).hi});
    env_.by_key[l.key()] = iv;
  }

  void pointer_fragment(Fragment& f, const LValue& l, const StateConstraint& c) {
    const Plan& p = plans_.at(l.key());
    CTypePtr elem = c.ctype->elem;
    switch (p.kind) {
      case PtrPlan::Alias: {
        Alias a = *alias_of(c);
        f.items.push_back({false, ir::assign(lvalue_expr(l), ir::ptr_add(value_of(a.base), to_ir(a.offset))), nullptr});
        break;
      }
      case PtrPlan::ObjectParam: break;  // the object is the declaration itself
      case PtrPlan::Stack: {
        std::string s = storage_name(l, "_storage", static_cast<std::int64_t>(p.h + 1));
        f.items.push_back({false, ir::assign(lvalue_expr(l), ir::var(s)), nullptr});
        break;
      }
      case PtrPlan::Heap: {
        ir::ExprPtr lhs = lvalue_expr(l);
        sym::Expr n = count_of(sym::add(c.range.hi(), sym::constant(1)));
        f.items.push_back({false, ir::alloc(lhs, storage_elem(elem), to_ir(n)), nullptr});
        f.items.push_back({true, {}, ir::cmp(CmpOp::Ne, lhs, ir::null())});
        break;
      }
      case PtrPlan::OnePastEnd:
        if (!is_param_var(l)) {
          std::string s = storage_name(l, "_end", 1);
          f.items.push_back({false, ir::assign(lvalue_expr(l), ir::ptr_add(ir::var(s), ir::constant(1))), nullptr});
        }
        break;
    }
    add_init(f, c, value_of(l));
  }

  Fragment fragment(const LValue& l, const StateConstraint& c) {
    Fragment f{l, r_.graph.deps(l), {}};
    if (c.ctype->is_integer()) integer_fragment(f, l, c);
    else if (c.ctype->is_pointer()) pointer_fragment(f, l, c);
    else if (c.ctype->is_array()) {
      lvalue_expr(l);  // declares array parameters
      add_init(f, c, value_of(l));
    }
    add_checks(f, c);
    return f;
  }

  const TypedSpec& spec_;
  const InferenceResult& r_;
  Namer& names_;
  const TargetConfig& cfg_;
  std::map<std::string, Plan> plans_;
  sym::Bounds env_;
};

}  // namespace

// --------------------------------------------------------------- generate

ir::Program generate(const TypedSpec& spec, const std::vector<const InferenceResult*>& clauses) {
  if (clauses.empty()) throw std::invalid_argument("no clause to generate a driver for");
  for (const auto* c : clauses)
    if (!c || !c->ok()) throw std::invalid_argument("cannot generate a driver for a failed clause");

  const TargetConfig& cfg = spec.env.config();
  ir::Program prog;
  prog.target = spec.spec.target.name;
  std::set<std::string> taken{prog.target};
  for (const auto& g : spec.spec.globals) {
    taken.insert(g.name);
    prog.globals.push_back({g.name, g.type});
  }
  prog.driver_name = cfg.prefix + prog.target;
  for (int i = 1; taken.count(prog.driver_name); ++i) prog.driver_name = cfg.prefix + prog.target + "_" + std::to_string(i);
  taken.insert(prog.driver_name);
  Namer names(taken);

  std::vector<std::vector<Fragment>> frags;
  std::vector<ir::Stmt> calls;
  for (const auto* c : clauses) {
    ClauseGen g(spec, *c, names);
    frags.push_back(g.fragments());
    calls.push_back(g.call());
  }

  if (clauses.size() == 1) {
    std::vector<const Fragment*> all;
    for (const auto& f : frags[0]) all.push_back(&f);
    prog.body = assemble(all, {calls[0]});
  } else {
    // Hoist the fragments that every clause shares verbatim, as long as
    // everything they depend on is hoisted too.
    std::vector<std::map<std::string, const Fragment*>> by_key(frags.size());
    for (std::size_t i = 0; i < frags.size(); ++i)
      for (const auto& f : frags[i]) by_key[i][f.lv.key()] = &f;
    std::set<std::string> hoisted;
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& f : frags[0]) {
        const std::string& k = f.lv.key();
        if (hoisted.count(k)) continue;
        std::string text = f.text();
        bool ok = true;
        for (std::size_t i = 0; i < frags.size() && ok; ++i) {
          auto it = by_key[i].find(k);
          ok = it != by_key[i].end() && it->second->text() == text;
          if (ok)
            for (const auto& d : it->second->deps) ok = ok && hoisted.count(d.key());
        }
        if (ok) changed = hoisted.insert(k).second || changed;
      }
    }
    std::vector<const Fragment*> shared;
    for (const auto& f : frags[0])
      if (hoisted.count(f.lv.key())) shared.push_back(&f);
    std::vector<ir::Block> arms;
    for (std::size_t i = 0; i < frags.size(); ++i) {
      std::vector<const Fragment*> own;
      for (const auto& f : frags[i])
        if (!hoisted.count(f.lv.key())) own.push_back(&f);
      arms.push_back(assemble(own, {calls[i]}));
    }
    std::string d = names.get("var", cfg.prefix + "disjunction", CType::integer("int"));
    int first = clauses.size() == 2 ? 0 : 1;
    ir::Block tail{ir::range_init(ir::var(d), "int", ir::constant(first),
                                  ir::constant(first + static_cast<int>(clauses.size()) - 1)),
                   ir::switch_on(ir::var(d), std::move(arms), first)};
    prog.body = assemble(shared, std::move(tail));
  }
  prog.decls = names.decls();
  return prog;
}

ir::Program gen_clause(const TypedSpec& spec, const InferenceResult& clause) { return generate(spec, {&clause}); }

// ------------------------------------------------------------------- emit

namespace {

std::string builtin_type(const std::string& builtin) {
  std::string s = builtin;
  std::replace(s.begin(), s.end(), '_', ' ');
  return s;
}

struct Emitter {
  const TypedSpec& spec;
  EmitStyle style;
  std::ostringstream os;

  std::string range_fn(const std::string& kind) const {
    const std::string& b = spec.env.config().kind(kind).builtin;
    return style == EmitStyle::FRAMAC ? "Frama_C_" + b + "_interval" : "ctxgen_range_" + b;
  }

  void block(const ir::Block& b, int indent) {
    std::string pad(indent * 2, ' ');
    for (const auto& s : b) {
      switch (s.kind) {
        case ir::Stmt::Kind::Assign: os << pad << ir::render(s.lhs) << " = " << ir::render(s.a) << ";\n"; break;
        case ir::Stmt::Kind::RangeInit:
          os << pad << ir::render(s.lhs) << " = " << range_fn(s.int_kind) << "(" << ir::render(s.a) << ", "
             << ir::render(s.b) << ");\n";
          break;
        case ir::Stmt::Kind::MakeUnknown:
          if (style == EmitStyle::FRAMAC)
            os << pad << "Frama_C_make_unknown((char *)" << paren(s.a) << ", " << ir::render(s.b) << ");\n";
          else
            os << pad << "ctxgen_make_unknown((void *)" << paren(s.a) << ", " << ir::render(s.b) << ");\n";
          break;
        case ir::Stmt::Kind::Alloc: {
          std::int64_t w = spec.env.size_of(*s.elem);
          ir::ExprPtr bytes = s.a;
          if (w != 1) {
            bytes = s.a->kind == ir::Expr::Kind::Const ? ir::constant(s.a->value * w)
                                                        : ir::binary(BinOp::Mul, s.a, ir::constant(w));
          }
          os << pad << ir::render(s.lhs) << " = (" << CType::pointer(s.elem)->spelling() << ")malloc("
             << ir::render(bytes) << ");\n";
          break;
        }
        case ir::Stmt::Kind::Guard:
          os << pad << "if (" << ir::render(s.cond) << ") {\n";
          block(s.bodies[0], indent + 1);
          os << pad << "}\n";
          break;
        case ir::Stmt::Kind::Switch:
          if (s.first_case == 0 && s.bodies.size() == 2) {
            os << pad << "if (" << ir::render(s.a) << ") {\n";
            block(s.bodies[1], indent + 1);
            os << pad << "} else {\n";
            block(s.bodies[0], indent + 1);
            os << pad << "}\n";
          } else {
            os << pad << "switch (" << ir::render(s.a) << ") {\n";
            for (std::size_t i = 0; i < s.bodies.size(); ++i) {
              os << pad << "  case " << (s.first_case + static_cast<int>(i)) << ": {\n";
              block(s.bodies[i], indent + 2);
              os << pad << "    break;\n" << pad << "  }\n";
            }
            os << pad << "}\n";
          }
          break;
        case ir::Stmt::Kind::Call: {
          os << pad << s.callee << "(";
          for (std::size_t i = 0; i < s.args.size(); ++i) os << (i ? ", " : "") << ir::render(s.args[i]);
          os << ");\n";
          break;
        }
      }
    }
  }

  static std::string paren(const ir::ExprPtr& e) {
    std::string r = ir::render(e);
    bool simple = e->kind == ir::Expr::Kind::Var || e->kind == ir::Expr::Kind::Field ||
                  e->kind == ir::Expr::Kind::Index || e->kind == ir::Expr::Kind::AddrOf;
    return simple ? r : "(" + r + ")";
  }
};

}  // namespace

std::string generic_header(const TargetConfig& cfg) {
  std::ostringstream os;
  os << "#ifndef CTXGEN_H\n#define CTXGEN_H\n\n#include <stddef.h>\n\n";
  std::set<std::string> done;
  for (const auto& [name, k] : cfg.kinds) {
    if (!done.insert(k.builtin).second) continue;
    std::string t = builtin_type(k.builtin);
    os << t << " ctxgen_range_" << k.builtin << "(" << t << " lo, " << t << " hi);\n";
  }
  os << "void ctxgen_make_unknown(void *p, size_t n);\n\n#endif\n";
  return os.str();
}

std::string emit_c(const ir::Program& p, const TypedSpec& spec, EmitStyle style) {
  Emitter e{spec, style, {}};
  auto& os = e.os;
  os << "/* Calling context for " << p.target << ". */\n\n";
  os << "#include <stddef.h>\n#include <stdint.h>\n#include <stdlib.h>\n";
  os << (style == EmitStyle::FRAMAC ? "#include \"__fc_builtin.h\"\n" : "#include \"ctxgen.h\"\n");

  const SpecFile& sf = spec.spec;
  if (!sf.aliases.empty() || !sf.typedefs.empty()) os << "\n";
  for (const auto& [alias, kind] : sf.aliases) os << "typedef " << kind << " " << alias << ";\n";
  for (const auto& s : sf.typedefs) os << "typedef struct " << s.name << " " << s.name << ";\n";
  for (const auto& s : sf.typedefs) {
    os << "struct " << s.name << " {\n";
    for (const auto& f : s.fields) os << "  " << f.type->declare(f.name) << ";\n";
    os << "};\n";
  }
  if (!sf.globals.empty()) os << "\n";
  for (const auto& g : sf.globals) os << "extern " << g.type->declare(g.name) << ";\n";

  os << "\n" << sf.target.return_type->declare("") << (sf.target.return_type->is_pointer() ? "" : " ") << sf.target.name
     << "(";
  for (std::size_t i = 0; i < sf.target.params.size(); ++i)
    os << (i ? ", " : "") << sf.target.params[i].type->declare(sf.target.params[i].name);
  if (sf.target.params.empty()) os << "void";
  os << ");\n\n";

  os << "int " << p.driver_name << "(void)\n{\n";
  for (const auto& d : p.decls) os << "  " << d.type->declare(d.name) << ";\n";
  if (!p.decls.empty()) os << "\n";
  e.block(p.body, 1);
  os << "  return 0;\n}\n";
  return os.str();
}

}  // namespace ctxgen
