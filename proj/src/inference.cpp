#include "ctxgen/inference.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ctxgen {

using sym::Expr;

const char* spelling(FailureCause c) {
  switch (c) {
    case FailureCause::INCONSISTENT: return "INCONSISTENT";
    case FailureCause::CYCLE: return "CYCLE";
    case FailureCause::UNSUPPORTED: return "UNSUPPORTED";
  }
  return "?";
}

InferenceError::InferenceError(InferenceFailure f)
    : std::runtime_error(std::string(spelling(f.cause)) + ": " + f.explanation), failure_(std::move(f)) {}

std::string Derivation::render() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    os << (i + 1) << ". " << s.rule << " [" << s.literal << "]";
    if (s.update) os << " " << dump_line(s.update->first, s.update->second);
    for (const auto& [a, b] : s.edges) os << " edge " << a.key() << " -> " << b.key();
    os << "\n";
  }
  return os.str();
}

bool replay(const Derivation& d, SigmaMap* sigma_out, DepGraph* graph_out) {
  SigmaMap sigma;
  DepGraph graph;
  for (const auto& s : d.steps) {
    if (sigma.digest() != s.before) return false;
    if (s.update) {
      sigma.set(s.update->first, s.update->second);
      graph.add_node(s.update->first);
    }
    for (const auto& [a, b] : s.edges) {
      try {
        graph.add_dependency(a, {b});
      } catch (const CycleError&) {
        return false;
      }
    }
    if (sigma.digest() != s.after) return false;
  }
  if (sigma_out) *sigma_out = sigma;
  if (graph_out) *graph_out = graph;
  return true;
}

namespace {

CTypePtr decay(const CTypePtr& t) { return t->is_array() ? CType::pointer(t->elem) : t; }

TermPtr int_const(const Int& v) { return make_const(v, {}, CType::logic_integer()); }

TermPtr norm_add(const TermPtr& a, const TermPtr& b) {
  return normalize_term(make_binary(BinOp::Add, a, b, {}, CType::logic_integer()));
}

TermPtr norm_sub(const TermPtr& a, const TermPtr& b) {
  return normalize_term(make_binary(BinOp::Sub, a, b, {}, CType::logic_integer()));
}

Expr plus(const Expr& e, long k) { return sym::simplify(sym::add(e, sym::constant(k))); }

void append_unique(std::vector<LValue>& out, const std::vector<LValue>& xs) {
  for (const auto& x : xs)
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
}

int term_depth(const TermPtr& t) {
  int d = 0;
  for (const auto& k : t->kids) d = std::max(d, term_depth(k));
  return d + 1;
}

int literal_depth(const Literal& l) {
  const Predicate& p = *l.atom;
  if (p.kind == Predicate::Kind::Defined) return term_depth(p.mem);
  if (p.kind == Predicate::Kind::Cmp) return std::max(term_depth(p.lhs), term_depth(p.rhs));
  return 1;
}

/// Position of a cell under a pointer: `*(p + i)` and field paths below it.
struct CellPath {
  LValue base;
  TermPtr index;
  std::string path;
};

std::optional<CellPath> cell_path(const TermPtr& t) {
  if (t->kind == Term::Kind::Deref) return CellPath{tbase(t->kid(0)), toffset(t->kid(0)), ""};
  if (t->kind == Term::Kind::Field) {
    auto cp = cell_path(t->kid(0));
    if (cp) cp->path += "." + t->name;
    return cp;
  }
  return std::nullopt;
}

}  // namespace

struct InferenceEngine::Impl {
  struct AliasInfo {
    LValue base;
    TermPtr off;
  };
  struct PendingNotDefined {
    LValue base;
    TermPtr lo, hi;
    DefKind kind;
    std::string text;
    Pos pos;
  };

  const TypeEnv& env;
  std::size_t budget;
  std::size_t used = 0;
  SigmaMap sigma;
  DepGraph graph;
  Derivation deriv;
  std::map<std::string, AliasInfo> aliases;
  std::map<std::string, LValue> seen;
  std::vector<std::pair<std::string, std::string>> rules;  // (rule, subject)
  std::string literal;
  Pos literal_pos;
  std::vector<PendingNotDefined> pending;

  Impl(const TypeEnv& e, std::size_t b) : env(e), budget(b) {}

  // ------------------------------------------------------------ bookkeeping

  [[noreturn]] void fail(FailureCause c, const std::string& why) {
    InferenceFailure f;
    f.cause = c;
    f.literal = literal;
    f.pos = literal_pos;
    f.explanation = why;
    throw InferenceError(std::move(f));
  }

  [[noreturn]] void fail_cycle(const CycleError& e) {
    InferenceFailure f;
    f.cause = FailureCause::CYCLE;
    f.literal = literal;
    f.pos = literal_pos;
    f.explanation = e.what();
    f.cycle = e.path;
    throw InferenceError(std::move(f));
  }

  struct Scope {
    Impl& m;
    Scope(Impl& impl, const std::string& rule, const std::string& subject) : m(impl) {
      if (++m.used > m.budget) {
        InferenceFailure f;
        f.cause = FailureCause::UNSUPPORTED;
        f.literal = m.literal;
        f.pos = m.literal_pos;
        f.explanation = "step budget exceeded";
        f.budget_exceeded = true;
        throw InferenceError(std::move(f));
      }
      m.rules.emplace_back(rule, subject);
    }
    ~Scope() { m.rules.pop_back(); }
  };

  DerivationStep step() const {
    DerivationStep s;
    s.rule = rules.empty() ? "And" : rules.back().first;
    s.literal = rules.empty() ? literal : rules.back().second;
    s.before = s.after = sigma.digest();
    return s;
  }

  void verdict(const std::string& note) {
    DerivationStep s = step();
    s.rule += " (" + note + ")";
    deriv.steps.push_back(std::move(s));
  }

  void put(const LValue& l, const StateConstraint& c) {
    if (const auto* old = sigma.find(l); old && dump_line(l, *old) == dump_line(l, c)) return;
    DerivationStep s = step();
    sigma.set(l, c);
    graph.add_node(l);
    s.after = sigma.digest();
    s.update = std::make_pair(l, c);
    deriv.steps.push_back(std::move(s));
  }

  /// Adds from -> to for every left-value in `to`; throws CycleError.
  void edge(const LValue& from, const std::vector<LValue>& to) {
    std::vector<LValue> fresh;
    for (const auto& t : to)
      if (!graph.has_edge(from, t) && std::find(fresh.begin(), fresh.end(), t) == fresh.end()) fresh.push_back(t);
    if (fresh.empty()) return;
    graph.add_dependency(from, fresh);
    DerivationStep s = step();
    for (const auto& t : fresh) s.edges.emplace_back(from, t);
    deriv.steps.push_back(std::move(s));
  }

  sym::Bounds bounds() const {
    sym::Bounds b;
    const auto& cfg = env.config();
    for (const auto& [k, l] : seen) {
      const auto& t = l.type();
      if (t && t->is_integer() && !t->is_logic_integer() && cfg.has_kind(t->name))
        b.by_key[k] = sym::Interval{cfg.min_of(t->name), cfg.max_of(t->name)};
    }
    for (const auto& [l, c] : sigma.entries()) {
      if (!c.ctype->is_integer()) continue;
      if (c.range.is_empty()) continue;
      sym::Interval iv{sym::interval_of(c.range.lo(), &b).lo, sym::interval_of(c.range.hi(), &b).hi};
      auto it = b.by_key.find(l.key());
      b.by_key[l.key()] = it == b.by_key.end() ? iv : it->second.meet(iv);
    }
    return b;
  }

  void note_seen(const LValue& l) { seen.emplace(l.key(), l); }

  // ------------------------------------------------------------ aliases

  /// Rewrites dereferenced memory values through known aliases.
  TermPtr canon(const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Const:
      case Term::Kind::Var: return t;
      case Term::Kind::Field: return make_field(canon(t->kid(0)), t->name, t->pos, t->type);
      case Term::Kind::Binary: return make_binary(t->op, canon(t->kid(0)), canon(t->kid(1)), t->pos, t->type);
      case Term::Kind::Disp: return make_disp(canon(t->kid(0)), canon(t->kid(1)), canon(t->kid(2)), t->pos, t->type);
      case Term::Kind::Deref: {
        TermPtr m = canon(t->kid(0));
        auto [root, off] = resolve(tbase(m), toffset(m));
        TermPtr rm = normalize_term(make_disp(root.term(), off, off, t->pos, decay(root.type())));
        return make_deref(rm, t->pos, t->type);
      }
    }
    return t;
  }

  std::pair<LValue, TermPtr> resolve(LValue l, TermPtr off) const {
    for (int guard = 0; guard < 1000; ++guard) {
      auto it = aliases.find(l.key());
      if (it == aliases.end()) return {l, off};
      off = norm_add(it->second.off, off);
      l = it->second.base;
    }
    throw std::logic_error("alias chain does not terminate");
  }

  bool has_cells(const LValue& root) const {
    for (const auto& [l, c] : sigma.entries()) {
      auto cp = cell_path(l.term());
      if (cp && cp->base == root) return true;
    }
    return false;
  }

  // ------------------------------------------------------------ left-values

  std::vector<LValue> anchors(const TermPtr& t) const {
    if (!t->type->is_struct()) return {LValue(t)};
    switch (t->kind) {
      case Term::Kind::Deref: {
        std::vector<LValue> out{tbase(t->kid(0))};
        append_unique(out, lvalues_of(toffset(t->kid(0))));
        return out;
      }
      case Term::Kind::Field: return anchors(t->kid(0));
      default: return {};
    }
  }

  /// Idempotence, Variable, Dereference and field access: puts the
  /// left-value `t` (canonical) and its prerequisites in Σ.
  void ensure(const TermPtr& t) {
    LValue l(t);
    bool aggregate = t->type->is_struct();
    if (!aggregate) {
      note_seen(l);
      if (sigma.contains(l)) {
        Scope s(*this, "Idempotence", "defined(" + l.key() + ")");
        verdict("present");
        return;
      }
    }
    switch (t->kind) {
      case Term::Kind::Var: {
        if (aggregate) return;
        Scope s(*this, "Variable", "defined(" + l.key() + ")");
        put(l, StateConstraint::fresh(t->type));
        return;
      }
      case Term::Kind::Deref: {
        const TermPtr& m = t->kid(0);
        LValue base = tbase(m);
        TermPtr off = toffset(m);
        Scope s(*this, "Dereference", "defined(" + l.key() + ")");
        require_region(base.term(), off, off, std::nullopt);
        if (aggregate) return;
        put(l, StateConstraint::fresh(t->type));
        std::vector<LValue> deps{base};
        append_unique(deps, lvalues_of(off));
        edge(l, deps);
        check_cell_alias(l);
        return;
      }
      case Term::Kind::Field: {
        const TermPtr& b = t->kid(0);
        if (b->kind != Term::Kind::Var) ensure(b);
        if (aggregate) return;
        Scope s(*this, "Field", "defined(" + l.key() + ")");
        put(l, StateConstraint::fresh(t->type));
        edge(l, anchors(b));
        check_cell_alias(l);
        return;
      }
      default: throw std::invalid_argument("not a left-value: " + render(t));
    }
  }

  void ensure_all(const TermPtr& t) {
    for (const auto& l : lvalues_of(t)) ensure(l.term());
  }

  /// A new cell whose index is not provably distinct from an existing cell
  /// of the same base and field path gets a runtime distinctness check.
  void check_cell_alias(const LValue& l) {
    auto cp = cell_path(l.term());
    if (!cp) return;
    sym::Bounds b = bounds();
    Expr i = sym::from_term(cp->index);
    for (const auto& [k, c] : sigma.entries()) {
      if (k == l) continue;
      auto cq = cell_path(k.term());
      if (!cq || !(cq->base == cp->base) || cq->path != cp->path) continue;
      Expr j = sym::from_term(cq->index);
      if (sym::proves_le(plus(i, 1), j, &b) || sym::proves_le(plus(j, 1), i, &b)) continue;
      if (sym::proves_le(i, j, &b) && sym::proves_le(j, i, &b))
        fail(FailureCause::UNSUPPORTED, "cells " + l.key() + " and " + k.key() + " name the same location");
      RuntimeCheck rc{{CheckAtom{CmpOp::Le, plus(i, 1), j}, CheckAtom{CmpOp::Ge, i, plus(j, 1)}}};
      StateConstraint sc = sigma.at(l);
      if (sc.add_check(rc)) {
        std::vector<LValue> deps;
        for (const auto& x : rc.symbols())
          if (!(x == l)) deps.push_back(x);
        edge(l, deps);
        put(l, sc);
      }
    }
  }

  // ------------------------------------------------------------ regions

  void require_region(const TermPtr& base, const TermPtr& lo, const TermPtr& hi, std::optional<DefKind> kind) {
    ensure(base);
    ensure_all(lo);
    ensure_all(hi);
    require_region_sym(LValue(base), sym::from_term(lo), sym::from_term(hi), kind);
  }

  static std::string region_text(const LValue& b, const Expr& lo, const Expr& hi) {
    return "defined(" + b.key() + " + (" + sym::render(lo) + " .. " + sym::render(hi) + "))";
  }

  void require_region_sym(const LValue& b, const Expr& lo, const Expr& hi, std::optional<DefKind> kind) {
    if (auto it = aliases.find(b.key()); it != aliases.end()) {
      Scope s(*this, "Range-2", region_text(b, lo, hi));
      Expr off = sym::from_term(it->second.off);
      require_region_sym(it->second.base, sym::simplify(sym::add(off, lo)), sym::simplify(sym::add(off, hi)), kind);
      return;
    }
    Scope s(*this, "Range-1", region_text(b, lo, hi));
    sym::Bounds env_b = bounds();
    SymRange r = SymRange::of(lo, hi);
    if (proves_empty(r, &env_b)) {
      verdict("vacuous");
      return;
    }
    bool nonvacuous = proves_nonempty(r, &env_b);
    CheckAtom vacuous{CmpOp::Le, plus(hi, 1), lo};
    side_condition(b, CheckAtom{CmpOp::Le, sym::constant(0), lo}, nonvacuous, vacuous, env_b);
    StateConstraint c = sigma.at(b);
    if (c.ctype->is_array())
      side_condition(b, CheckAtom{CmpOp::Le, hi, sym::constant(c.ctype->length - 1)}, nonvacuous, vacuous, env_b);
    c = sigma.at(b);
    std::vector<LValue> deps = sym::symbols(lo);
    append_unique(deps, sym::symbols(hi));
    edge(b, deps);
    SymRange cells = SymRange::of(sym::constant(0), hi);
    c.range = join(c.range, cells, &env_b);
    if (kind) {
      c.kinds.insert(*kind);
      if (*kind == DefKind::Initialized) c.init = join(c.init, cells, &env_b);
    }
    put(b, c);
  }

  void side_condition(const LValue& b, const CheckAtom& a, bool nonvacuous, const CheckAtom& vacuous,
                      const sym::Bounds& env_b) {
    if (sym::proves_le(a.lhs, a.rhs, &env_b)) return;
    if (nonvacuous && sym::proves_le(plus(a.rhs, 1), a.lhs, &env_b))
      fail(FailureCause::INCONSISTENT, "region bound " + sym::render(a.lhs) + " <= " + sym::render(a.rhs) +
                                           " is violated for " + b.key());
    RuntimeCheck rc;
    rc.atoms.push_back(a);
    if (!nonvacuous) rc.atoms.push_back(vacuous);
    StateConstraint c = sigma.at(b);
    if (!c.add_check(rc)) return;
    edge(b, rc.symbols());
    put(b, c);
  }

  // ------------------------------------------------------------ comparisons

  Tri decide(const Expr& d, CmpOp op, const sym::Bounds& b) const {
    Expr zero = sym::constant(0);
    bool le0 = sym::proves_le(d, zero, &b), ge0 = sym::proves_le(zero, d, &b);
    bool pos = sym::proves_le(sym::constant(1), d, &b), neg = sym::proves_le(d, sym::constant(-1), &b);
    switch (op) {
      case CmpOp::Le: return le0 ? Tri::TRUE : pos ? Tri::FALSE : Tri::UNKNOWN;
      case CmpOp::Ge: return ge0 ? Tri::TRUE : neg ? Tri::FALSE : Tri::UNKNOWN;
      case CmpOp::Eq: return (le0 && ge0) ? Tri::TRUE : (pos || neg) ? Tri::FALSE : Tri::UNKNOWN;
      default: throw std::invalid_argument("comparison operator not normalized");
    }
  }

  /// Attaches `rc` to one of its symbols, preferring one that already depends
  /// on all the others.
  void attach_check(const RuntimeCheck& rc) {
    std::vector<LValue> syms = rc.symbols();
    if (syms.empty()) fail(FailureCause::UNSUPPORTED, "runtime check without left-values: " + render(rc));
    std::vector<LValue> order;
    for (const auto& h : syms) {
      bool latest = std::all_of(syms.begin(), syms.end(), [&](const LValue& o) { return o == h || graph.reaches(h, o); });
      if (latest) order.push_back(h);
    }
    for (auto it = syms.rbegin(); it != syms.rend(); ++it) append_unique(order, {*it});
    std::optional<CycleError> last;
    for (const auto& h : order) {
      std::vector<LValue> others;
      for (const auto& o : syms)
        if (!(o == h)) others.push_back(o);
      try {
        edge(h, others);
      } catch (const CycleError& e) {
        last = e;
        continue;
      }
      StateConstraint c = sigma.at(h);
      c.add_check(rc);
      put(h, c);
      return;
    }
    fail_cycle(*last);
  }

  void cmp_sym(const Expr& a, CmpOp op, const Expr& b, const std::string& subject) {
    Scope s(*this, "Cmp", subject);
    sym::Bounds env_b = bounds();
    Expr d = sym::simplify(sym::sub(a, b));
    Tri t = decide(d, op, env_b);
    if (t == Tri::TRUE) {
      verdict("entailed");
      return;
    }
    if (t == Tri::FALSE) fail(FailureCause::INCONSISTENT, subject + " is false under the current constraints");
    auto pv = sym::poly_view(d);
    if (!pv || pv->monos.empty()) fail(FailureCause::UNSUPPORTED, "cannot decide " + subject);

    std::vector<LValue> cands = sym::atoms(a);
    append_unique(cands, sym::atoms(b));
    for (const auto& l : cands) {
      if (!l.type() || !l.type()->is_integer()) continue;
      std::size_t k = pv->monos.size();
      for (std::size_t m = 0; m < pv->monos.size(); ++m) {
        const auto& mo = pv->monos[m];
        if (mo.atoms.size() == 1 && (mo.atoms[0]->kind == sym::Node::Kind::Var || mo.atoms[0]->kind == sym::Node::Kind::Deref) &&
            mo.atoms[0]->lv == l)
          k = m;
      }
      if (k == pv->monos.size()) continue;
      const Int c = pv->monos[k].coef;
      bool ok = c_mod(pv->constant, c) == 0;
      Expr rest = sym::constant(-c_div(pv->constant, c));
      for (std::size_t m = 0; ok && m < pv->monos.size(); ++m) {
        if (m == k) continue;
        const auto& mo = pv->monos[m];
        for (const auto& at : mo.atoms) {
          auto syms = sym::symbols(at);
          if (std::find(syms.begin(), syms.end(), l) != syms.end()) ok = false;
        }
        if (c_mod(mo.coef, c) != 0) ok = false;
        if (ok) rest = sym::add(rest, sym::mul(sym::constant(-c_div(mo.coef, c)), mo.mono));
      }
      if (!ok) continue;
      Expr t3 = sym::simplify(rest);
      CmpOp op2 = c > 0 ? op : flip(op);
      // An equality defines its holder: closing a cycle is a failure. An
      // inequality can move to another holder or to a runtime check.
      try {
        edge(l, sym::symbols(t3));
      } catch (const CycleError& e) {
        if (op == CmpOp::Eq) fail_cycle(e);
        continue;
      }
      Scope s1(*this, "Cmp-1", l.key() + " " + spelling(op2) + " " + sym::render(t3));
      StateConstraint sc = sigma.at(l);
      SymRange nr = meet(sc.range, ival(op2, t3), &env_b);
      if (nr.is_empty()) fail(FailureCause::INCONSISTENT, "empty range for " + l.key());
      const auto& ty = l.type();
      const auto& cfg = env.config();
      if (!ty->is_logic_integer() && cfg.has_kind(ty->name)) {
        SymRange kr = SymRange::of(sym::constant(cfg.min_of(ty->name)), sym::constant(cfg.max_of(ty->name)));
        if (proves_empty(meet(nr, kr, &env_b), &env_b))
          fail(FailureCause::INCONSISTENT, "range of " + l.key() + " leaves its type " + ty->spelling());
      }
      sc.range = nr;
      put(l, sc);
      return;
    }
    Scope s2(*this, "Cmp-2", subject);
    attach_check(RuntimeCheck::of(op, a, b));
  }

  // ------------------------------------------------------------ memory equality

  int cost(const LValue& l) const {
    const StateConstraint& c = sigma.at(l);
    bool neutral_range = c.ctype->is_integer() ? c.range.is_top() : c.range.is_empty();
    return (neutral_range ? 0 : 1) + static_cast<int>(c.checks.size());
  }

  bool has_region(const LValue& l) const {
    const StateConstraint& c = sigma.at(l);
    return c.ctype->is_array() || !c.range.is_empty();
  }

  std::optional<std::string> ineligible(const LValue& l) const {
    const auto& t = l.type();
    if (!t->is_pointer()) return l.key() + " is not an assignable pointer";
    if (aliases.count(l.key())) return l.key() + " is already an alias";
    if (has_cells(l)) return "cells of " + l.key() + " were constrained before the equality";
    return std::nullopt;
  }

  /// Li == Lj + (Tj - Ti). Edges are inserted before any Σ update, so a
  /// CycleError leaves the state unchanged.
  void make_alias(const LValue& li, const TermPtr& ti, const LValue& lj, const TermPtr& tj, const std::string& subject) {
    TermPtr t3 = norm_sub(tj, ti);
    std::vector<LValue> deps{lj};
    append_unique(deps, lvalues_of(t3));
    edge(li, deps);
    Scope s(*this, "Memory-Eq", subject);
    Expr s3 = sym::from_term(t3);
    StateConstraint c = sigma.at(li);
    auto shift = [&](const Expr& e) { return sym::simplify(sym::add(s3, e)); };
    if (!c.range.is_empty()) {
      require_region_sym(lj, shift(c.range.lo()), shift(c.range.hi()), std::nullopt);
      for (DefKind k : c.kinds)
        if (k != DefKind::Initialized) require_region_sym(lj, shift(c.range.lo()), shift(c.range.hi()), k);
    }
    if (!c.init.is_empty()) require_region_sym(lj, shift(c.init.lo()), shift(c.init.hi()), DefKind::Initialized);
    if (!c.range.is_empty()) {
      sym::Bounds env_b = bounds();
      SymRange shifted = SymRange::of(shift(c.range.lo()), shift(c.range.hi()));
      Tri sub = leq(shifted, sigma.at(lj).range, &env_b);
      if (sub == Tri::FALSE) fail(FailureCause::INCONSISTENT, "region of " + li.key() + " exceeds " + lj.key());
      if (sub == Tri::UNKNOWN)
        fail(FailureCause::UNSUPPORTED, "cannot decide whether the region of " + li.key() + " fits in " + lj.key());
    }
    c = sigma.at(li);
    c.range = SymRange::point(sym::simplify(sym::add(sym::var(lj), s3)));
    c.init = SymRange::empty();
    aliases[li.key()] = AliasInfo{lj, t3};
    put(li, c);
  }

  void memeq(const TermPtr& m1raw, const TermPtr& m2raw, const std::string& subject) {
    TermPtr m1 = canon(m1raw), m2 = canon(m2raw);
    LValue b1 = tbase(m1), b2 = tbase(m2);
    TermPtr o1 = toffset(m1), o2 = toffset(m2);
    ensure(b1.term());
    ensure(b2.term());
    ensure_all(o1);
    ensure_all(o2);
    auto [r1, ro1] = resolve(b1, o1);
    auto [r2, ro2] = resolve(b2, o2);
    if (r1 == r2) {
      sym::Bounds env_b = bounds();
      if (decide(sym::simplify(sym::sub(sym::from_term(ro1), sym::from_term(ro2))), CmpOp::Eq, env_b) == Tri::TRUE) {
        Scope s(*this, "Memory-Eq", subject);
        verdict("entailed");
        return;
      }
      // Same object on both sides: only the offsets are constrained.
      cmp_sym(sym::from_term(ro1), CmpOp::Eq, sym::from_term(ro2), subject);
      return;
    }
    bool first_is_i;
    int c1 = cost(b1), c2 = cost(b2);
    if (c1 != c2) first_is_i = c1 < c2;
    else first_is_i = !(has_region(b1) && !has_region(b2));
    struct Orientation {
      LValue li;
      TermPtr ti;
      LValue lj;
      TermPtr tj;
    };
    std::vector<Orientation> tries{{b1, o1, b2, o2}, {b2, o2, b1, o1}};
    if (!first_is_i) std::swap(tries[0], tries[1]);
    std::optional<CycleError> cycle;
    for (const auto& o : tries) {
      if (ineligible(o.li)) continue;
      try {
        make_alias(o.li, o.ti, o.lj, o.tj, subject);
        return;
      } catch (const CycleError& e) {
        if (!cycle) cycle = e;
      }
    }
    if (cycle) fail_cycle(*cycle);
    // Neither side can be made an alias: retry on the roots.
    for (const auto& o : {Orientation{r1, ro1, r2, ro2}, Orientation{r2, ro2, r1, ro1}}) {
      if (ineligible(o.li)) continue;
      try {
        make_alias(o.li, o.ti, o.lj, o.tj, subject);
        return;
      } catch (const CycleError& e) {
        fail_cycle(e);
      }
    }
    if (!r1.type()->is_pointer() && !r2.type()->is_pointer())
      fail(FailureCause::INCONSISTENT, r1.key() + " and " + r2.key() + " are distinct objects");
    fail(FailureCause::UNSUPPORTED, "neither " + r1.key() + " nor " + r2.key() + " can become an alias");
  }

  // ------------------------------------------------------------ negatives

  void memneq(const TermPtr& m1raw, const TermPtr& m2raw, const std::string& subject) {
    Scope s(*this, "Memory-Neq", subject);
    TermPtr m1 = canon(m1raw), m2 = canon(m2raw);
    ensure(tbase(m1).term());
    ensure(tbase(m2).term());
    ensure_all(toffset(m1));
    ensure_all(toffset(m2));
    auto [r1, o1] = resolve(tbase(m1), toffset(m1));
    auto [r2, o2] = resolve(tbase(m2), toffset(m2));
    if (!(r1 == r2)) {
      verdict("distinct objects");
      return;
    }
    Expr e1 = sym::from_term(o1), e2 = sym::from_term(o2);
    sym::Bounds env_b = bounds();
    Tri eq = decide(sym::simplify(sym::sub(e1, e2)), CmpOp::Eq, env_b);
    if (eq == Tri::FALSE) {
      verdict("distinct offsets");
      return;
    }
    if (eq == Tri::TRUE) fail(FailureCause::INCONSISTENT, "both sides denote " + r1.key() + " + " + render(o1));
    attach_check(RuntimeCheck{{CheckAtom{CmpOp::Le, plus(e1, 1), e2}, CheckAtom{CmpOp::Ge, e1, plus(e2, 1)}}});
  }

  void not_defined_prepare(const TermPtr& mraw, DefKind kind) {
    TermPtr m = canon(mraw);
    TermPtr base = m, lo = int_const(0), hi = int_const(0);
    if (m->kind == Term::Kind::Disp) {
      base = m->kid(0);
      lo = m->kid(1);
      hi = m->kid(2);
    }
    ensure(base);
    ensure_all(lo);
    ensure_all(hi);
    pending.push_back({LValue(base), lo, hi, kind, literal, literal_pos});
  }

  void not_defined_decide(const PendingNotDefined& p) {
    literal = p.text;
    literal_pos = p.pos;
    auto [root, off] = resolve(p.base, int_const(0));
    Expr soff = sym::from_term(off);
    Expr lo = sym::simplify(sym::add(soff, sym::from_term(p.lo)));
    Expr hi = sym::simplify(sym::add(soff, sym::from_term(p.hi)));
    Scope s(*this, "Not-Defined", region_text(root, lo, hi));
    sym::Bounds env_b = bounds();
    SymRange q = SymRange::of(lo, hi);
    if (proves_empty(q, &env_b)) fail(FailureCause::INCONSISTENT, "an empty memory range is always defined");
    const StateConstraint& c = sigma.at(root);
    SymRange valid;
    if (c.ctype->is_array()) {
      valid = SymRange::of(sym::constant(0), sym::constant(c.ctype->length - 1));
    } else if (c.range.is_empty()) {
      // one-past-the-end of a one-cell storage
      valid = SymRange::point(sym::constant(-1));
    } else {
      valid = c.range;
    }
    if (p.kind == DefKind::Initialized) {
      if (has_cells(root)) {
        // Invalid cells are never initialized.
        bool escapes = valid.is_empty() || sym::proves_le(plus(valid.hi(), 1), hi, &env_b) ||
                       sym::proves_le(plus(lo, 1), valid.lo(), &env_b);
        if (proves_nonempty(q, &env_b) && escapes) {
          verdict("outside the valid cells");
          return;
        }
        bool unknown = false;
        for (const auto& [l, lc] : sigma.entries()) {
          auto cp = cell_path(l.term());
          if (!cp || !(cp->base == root)) continue;
          Expr i = sym::from_term(cp->index);
          if (sym::proves_le(plus(i, 1), lo, &env_b) || sym::proves_le(plus(hi, 1), i, &env_b)) continue;
          Expr d = sym::simplify(sym::sub(i, lo), &env_b);
          if (sym::same(lo, hi) && cp->path.empty() && d->is_const() && d->value == 0)
            fail(FailureCause::INCONSISTENT, l.key() + " is assigned, hence initialized");
          unknown = true;
        }
        if (unknown) fail(FailureCause::UNSUPPORTED, "cells of " + root.key() + " are written individually");
      }
      valid = c.init;
    }
    bool nonempty = proves_nonempty(q, &env_b);
    bool escapes = valid.is_empty() || sym::proves_le(plus(valid.hi(), 1), hi, &env_b) ||
                   sym::proves_le(plus(lo, 1), valid.lo(), &env_b);
    if (nonempty && escapes) {
      verdict("outside the defined cells");
      return;
    }
    if (!valid.is_empty() && leq(q, valid, &env_b) == Tri::TRUE)
      fail(FailureCause::INCONSISTENT, region_text(root, lo, hi) + " holds by construction");
    if (!nonempty) attach_check(RuntimeCheck::of(CmpOp::Le, lo, hi));
    if (!escapes)
      attach_check(RuntimeCheck{{CheckAtom{CmpOp::Le, plus(valid.hi(), 1), hi}, CheckAtom{CmpOp::Le, plus(lo, 1), valid.lo()}}});
  }
};

InferenceEngine::InferenceEngine(const TypeEnv& env, std::size_t step_budget)
    : impl_(std::make_unique<Impl>(env, step_budget)) {}
InferenceEngine::~InferenceEngine() = default;

void InferenceEngine::set_literal(const std::string& text, Pos pos) {
  impl_->literal = text;
  impl_->literal_pos = pos;
}

#define CTXGEN_GUARD(...)                   \
  try {                                     \
    __VA_ARGS__;                            \
  } catch (const CycleError& e) {           \
    impl_->fail_cycle(e);                   \
  } catch (const sym::EvalError& e) {       \
    impl_->fail(FailureCause::UNSUPPORTED, e.what()); \
  }

void InferenceEngine::simplify_defined(const TermPtr& m, DefKind kind) {
  CTXGEN_GUARD({
    TermPtr c = impl_->canon(m);
    if (c->kind == Term::Kind::Disp)
      impl_->require_region(c->kid(0), c->kid(1), c->kid(2), kind);
    else
      impl_->require_region(c, int_const(0), int_const(0), kind);
  })
}

void InferenceEngine::simplify_cmp(const TermPtr& t1, CmpOp cop, const TermPtr& t2) {
  CTXGEN_GUARD({
    TermPtr a = impl_->canon(t1), b = impl_->canon(t2);
    impl_->ensure_all(a);
    impl_->ensure_all(b);
    CmpOp op = cop;
    Expr ea = sym::from_term(a), eb = sym::from_term(b);
    if (op == CmpOp::Lt) {
      ea = sym::add(ea, sym::constant(1));
      op = CmpOp::Le;
    } else if (op == CmpOp::Gt) {
      eb = sym::add(eb, sym::constant(1));
      op = CmpOp::Ge;
    } else if (op == CmpOp::Ne) {
      impl_->fail(FailureCause::UNSUPPORTED, "integer disequality must be split before inference");
    }
    impl_->cmp_sym(ea, op, eb, render(a) + " " + spelling(op) + " " + render(b));
  })
}

void InferenceEngine::simplify_memeq(const TermPtr& m1, const TermPtr& m2) {
  CTXGEN_GUARD(impl_->memeq(m1, m2, render(m1) + " == " + render(m2)))
}

void InferenceEngine::check_negative(const Literal& lit) {
  CTXGEN_GUARD({
    const Predicate& p = *lit.atom;
    if (p.kind == Predicate::Kind::Defined)
      impl_->not_defined_prepare(p.mem, p.def);
    else if (p.kind == Predicate::Kind::Cmp && p.op == CmpOp::Eq)
      impl_->memneq(p.lhs, p.rhs, render(p.lhs) + " != " + render(p.rhs));
    else
      impl_->fail(FailureCause::UNSUPPORTED, "negative literal of unexpected shape");
  })
}

void InferenceEngine::finish_negatives() {
  CTXGEN_GUARD({
    auto pending = impl_->pending;
    impl_->pending.clear();
    for (const auto& p : pending) impl_->not_defined_decide(p);
  })
}

#undef CTXGEN_GUARD

const SigmaMap& InferenceEngine::sigma() const { return impl_->sigma; }
const DepGraph& InferenceEngine::graph() const { return impl_->graph; }
const Derivation& InferenceEngine::derivation() const { return impl_->deriv; }
std::size_t InferenceEngine::steps_used() const { return impl_->used; }

// ---------------------------------------------------------------- And rule

InferenceResult simplify_clause(const ConjunctiveClause& clause, const TypeEnv& env, const InferenceOptions& opts) {
  InferenceResult res;
  int depth = 1;
  for (const auto& l : clause) depth = std::max(depth, literal_depth(l));
  res.step_budget = opts.step_budget ? opts.step_budget : 50 * (clause.size() + 1) * static_cast<std::size_t>(depth + 1);

  for (const auto& l : clause) {
    const Predicate& p = *l.atom;
    std::vector<TermPtr> terms;
    if (p.kind == Predicate::Kind::Defined) terms.push_back(p.mem);
    if (p.kind == Predicate::Kind::Cmp) terms = {p.lhs, p.rhs};
    for (const auto& t : terms) append_unique(res.mentions, lvalues_of(t));
  }

  std::vector<const Literal*> ptr_eqs, others, neqs, notdefs;
  for (const auto& l : clause) {
    if (l.positive && l.is_pointer_cmp()) ptr_eqs.push_back(&l);
    else if (l.positive) others.push_back(&l);
    else if (l.is_defined()) notdefs.push_back(&l);
    else neqs.push_back(&l);
  }
  std::stable_sort(ptr_eqs.begin(), ptr_eqs.end(),
                   [](const Literal* a, const Literal* b) { return literal_depth(*a) < literal_depth(*b); });

  InferenceEngine eng(env, res.step_budget);
  try {
    for (const auto* group : {&ptr_eqs, &others, &neqs, &notdefs})
      for (const Literal* l : *group) {
        const Predicate& p = *l->atom;
        eng.set_literal(render(*l), p.pos);
        if (!l->positive) {
          eng.check_negative(*l);
        } else if (p.kind == Predicate::Kind::Defined) {
          eng.simplify_defined(p.mem, p.def);
        } else if (p.kind == Predicate::Kind::Cmp && l->is_pointer_cmp()) {
          if (p.op != CmpOp::Eq) throw std::invalid_argument("pointer comparison other than == in a positive literal");
          eng.simplify_memeq(p.lhs, p.rhs);
        } else if (p.kind == Predicate::Kind::Cmp) {
          eng.simplify_cmp(p.lhs, p.op, p.rhs);
        } else if (p.kind == Predicate::Kind::False) {
          InferenceFailure f{FailureCause::INCONSISTENT, render(*l), p.pos, "literal \\false", false, {}};
          throw InferenceError(f);
        }
      }
    eng.finish_negatives();
  } catch (const InferenceError& e) {
    res.failure = e.failure();
  } catch (const std::exception& e) {
    res.failure = InferenceFailure{FailureCause::UNSUPPORTED, "", {}, e.what(), false, {}};
  }
  res.sigma = eng.sigma();
  res.graph = eng.graph();
  res.derivation = eng.derivation();
  res.steps_used = eng.steps_used();
  return res;
}

}  // namespace ctxgen
