#include "ctxgen/oracle.hpp"

#include "json.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

namespace ctxgen::oracle {

Value Value::integer(Int v) {
  Value x;
  x.kind = Kind::Int;
  x.i = std::move(v);
  return x;
}

Value Value::pointer(int obj, Int off) {
  Value x;
  x.kind = Kind::Ptr;
  x.obj = obj;
  x.off = std::move(off);
  return x;
}

Value Value::null_ptr() {
  Value x;
  x.kind = Kind::Null;
  return x;
}

const char* spelling(Truth t) {
  switch (t) {
    case Truth::TRUE: return "TRUE";
    case Truth::FALSE: return "FALSE";
    case Truth::FAULT: return "FAULT";
  }
  return "?";
}

namespace {

bool same_ptr(const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == Value::Kind::Null) return true;
  return a.obj == b.obj && a.off == b.off;
}

Int cdiv(const Int& a, const Int& b, BinOp op) {
  if (b == 0) throw Fault("division by zero");
  return op == BinOp::Div ? Int(a / b) : Int(a % b);  // truncating, as in C
}

Int arith(BinOp op, const Int& a, const Int& b) {
  switch (op) {
    case BinOp::Add: return a + b;
    case BinOp::Sub: return a - b;
    case BinOp::Mul: return a * b;
    case BinOp::Div:
    case BinOp::Mod: return cdiv(a, b, op);
  }
  return 0;
}

bool compare(CmpOp op, const Int& a, const Int& b) {
  switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Ge: return a >= b;
    case CmpOp::Gt: return a > b;
  }
  return false;
}

/// Object construction shared by the interpreter and the brute-force
/// enumeration.
struct Store {
  const TypeEnv& env;
  std::vector<Object>& heap;

  // `make` builds leaf values (integers and pointers).
  Value value_of(const CTypePtr& t, const std::function<Value(const CTypePtr&)>& make) {
    if (t->is_struct()) {
      Value v;
      v.kind = Value::Kind::Struct;
      const StructDef* s = env.find_struct(t->name);
      if (!s) throw Fault("unknown struct " + t->name);
      for (const auto& f : s->fields) {
        if (f.type->is_array()) {
          Value a;
          a.kind = Value::Kind::Array;
          a.obj = object(t->name + "." + f.name, f.type, make);
          v.fields[f.name] = a;
        } else {
          v.fields[f.name] = value_of(f.type, make);
        }
      }
      return v;
    }
    return make(t);
  }

  int object(const std::string& name, const CTypePtr& t, const std::function<Value(const CTypePtr&)>& make) {
    Object o;
    o.name = name;
    std::int64_t n = 1;
    o.elem = t;
    if (t->is_array()) {
      o.elem = t->elem;
      n = t->length;
    }
    heap.push_back(std::move(o));
    int id = static_cast<int>(heap.size()) - 1;
    std::vector<Value> cells;
    for (std::int64_t i = 0; i < n; ++i) cells.push_back(value_of(heap[id].elem, make));
    heap[id].cells = std::move(cells);
    return id;
  }
};

Value uninit(const CTypePtr&) { return Value{}; }

Value zero(const CTypePtr& t) { return t->is_pointer() ? Value::null_ptr() : Value::integer(0); }

// ------------------------------------------------------------- interpreter

struct Loc {
  int obj = -1;
  Int idx;
  std::vector<std::string> path;
};

class Machine {
 public:
  Machine(const ir::Program& p, const TypedSpec& spec, const Resolver& r)
      : p_(p), spec_(spec), r_(r), rng_(r.seed) {
    for (const auto& d : p.globals) types_[d.name] = d.type;
    for (const auto& d : p.decls) types_[d.name] = d.type;
    // Driver variables passed directly as integer arguments stand for the
    // corresponding source parameters.
    index_call_args(p.body);
    for (const auto& g : spec.spec.globals) source_[g.name] = g.name;
  }

  RunResult run() {
    State st;
    Store store{spec_.env, st.heap};
    for (const auto& d : p_.globals) st.vars[d.name] = store.object(d.name, d.type, zero);
    for (const auto& d : p_.decls) st.vars[d.name] = store.object(d.name, d.type, uninit);
    Frames fr{{&p_.body, 0}};
    exec(std::move(fr), std::move(st));
    return std::move(out_);
  }

 private:
  struct State {
    std::vector<Object> heap;
    std::map<std::string, int> vars;
    std::string path;
  };
  using Frames = std::vector<std::pair<const ir::Block*, std::size_t>>;

  void index_call_args(const ir::Block& b) {
    for (const auto& s : b) {
      if (s.kind == ir::Stmt::Kind::Call) {
        const auto& params = spec_.spec.target.params;
        for (std::size_t i = 0; i < s.args.size() && i < params.size(); ++i)
          if (s.args[i]->kind == ir::Expr::Kind::Var && params[i].type->is_integer())
            source_[s.args[i]->name] = params[i].name;
      }
      for (const auto& body : s.bodies) index_call_args(body);
    }
  }

  bool budget_left() {
    if (out_.states.size() + out_.pruned + out_.faults.size() >= r_.max_paths) {
      out_.truncated = true;
      return false;
    }
    return true;
  }

  void exec(Frames fr, State st) {
    try {
      while (!fr.empty()) {
        auto& [block, i] = fr.back();
        if (i == block->size()) {
          fr.pop_back();
          continue;
        }
        const ir::Stmt& s = (*block)[i++];
        switch (s.kind) {
          case ir::Stmt::Kind::Assign: {
            Value v = rvalue(st, s.a);
            write(st, lvalue(st, s.lhs), v);
            break;
          }
          case ir::Stmt::Kind::RangeInit: {
            Int lo = integer(st, s.a), hi = integer(st, s.b);
            if (lo > hi) throw Fault("empty range [" + to_string(lo) + "; " + to_string(hi) + "] for " + ir::render(s.lhs));
            Loc at = lvalue(st, s.lhs);
            std::vector<Int> choices = choose(s.lhs, lo, hi);
            std::string name = ir::render(s.lhs);
            for (std::size_t c = 0; c + 1 < choices.size(); ++c) {
              if (!budget_left()) return;
              State copy = st;
              write(copy, at, Value::integer(choices[c]));
              copy.path += name + "=" + to_string(choices[c]) + " ";
              exec(fr, std::move(copy));
            }
            if (choices.empty()) {
              ++out_.pruned;
              return;
            }
            write(st, at, Value::integer(choices.back()));
            st.path += name + "=" + to_string(choices.back()) + " ";
            break;
          }
          case ir::Stmt::Kind::MakeUnknown: make_unknown(st, s); break;
          case ir::Stmt::Kind::Alloc: {
            Int n = integer(st, s.a);
            if (n < 0) n = 0;
            if (n > r_.max_cells) {
              // malloc may fail; the driver's null guard takes over
              write(st, lvalue(st, s.lhs), Value::null_ptr());
              break;
            }
            Store store{spec_.env, st.heap};
            CTypePtr t = CType::array(s.elem, static_cast<std::int64_t>(n));
            int id = store.object("malloc(" + ir::render(s.lhs) + ")", t, uninit);
            st.heap[id].elem = s.elem;
            write(st, lvalue(st, s.lhs), Value::pointer(id, 0));
            break;
          }
          case ir::Stmt::Kind::Guard:
            if (!truth(st, s.cond)) {
              ++out_.pruned;
              return;
            }
            fr.push_back({&s.bodies[0], 0});
            break;
          case ir::Stmt::Kind::Switch: {
            Int v = integer(st, s.a) - s.first_case;
            if (v < 0 || v >= static_cast<long>(s.bodies.size())) {
              ++out_.pruned;
              return;
            }
            std::size_t k = static_cast<std::size_t>(v);
            st.path += "case=" + std::to_string(k + s.first_case) + " ";
            fr.push_back({&s.bodies[k], 0});
            break;
          }
          case ir::Stmt::Kind::Call: {
            ConcreteState cs;
            for (const auto& a : s.args) cs.args.push_back(rvalue(st, a));
            cs.heap = std::move(st.heap);
            cs.vars = std::move(st.vars);
            cs.path = st.path;
            if (!cs.path.empty()) cs.path.pop_back();
            out_.states.push_back(std::move(cs));
            return;
          }
        }
      }
      throw Fault("path ends without calling the target");
    } catch (const Fault& f) {
      out_.faults.push_back(std::string(f.what()) + " [" + st.path + "]");
    }
  }

  std::vector<Int> choose(const ir::ExprPtr& lhs, const Int& lo, const Int& hi) {
    std::vector<Int> out;
    switch (r_.strategy) {
      case Strategy::RANDOM: out.push_back(random_in(lo, hi)); break;
      case Strategy::EXTREMES:
        out.push_back(lo);
        if (hi != lo) out.push_back(hi);
        break;
      case Strategy::EXHAUSTIVE: {
        const std::vector<Int>* dom = nullptr;
        if (lhs->kind == ir::Expr::Kind::Var) {
          auto s = source_.find(lhs->name);
          if (s != source_.end()) {
            auto d = r_.domains.find(s->second);
            if (d != r_.domains.end()) dom = &d->second;
          }
        }
        if (dom) {
          for (const auto& v : *dom)
            if (lo <= v && v <= hi) out.push_back(v);
        } else if (hi - lo < r_.small_range) {
          for (Int v = lo; v <= hi; ++v) out.push_back(v);
        } else {
          std::set<Int> vs{lo, hi};
          for (const auto& v : r_.default_domain)
            if (lo <= v && v <= hi) vs.insert(v);
          out.assign(vs.begin(), vs.end());
        }
        break;
      }
    }
    return out;
  }

  Int random_in(const Int& lo, const Int& hi) {
    Int span = hi - lo;
    if (span == 0) return lo;
    auto draw = [&]() {
      Int x = 0;
      for (int k = 0; k < 3; ++k) x = (x << 64) + Int(rng_());
      return x;
    };
    switch (rng_() % 8) {
      case 0: return lo;
      case 1: return hi;
      case 2: return lo + Int(draw() % std::min<Int>(span + 1, 16));
      case 3: return hi - Int(draw() % std::min<Int>(span + 1, 16));
      case 4:
      case 5: {
        // a multiple of a small power of two, so that divisibility checks pass often
        Int m = Int(1) << (1 + rng_() % 6);
        Int v = lo + Int(draw() % (span + 1));
        Int r = v % m;
        if (r < 0) r += m;
        v -= r;
        return v < lo ? v + m <= hi ? v + m : lo : v;
      }
      default: return lo + Int(draw() % (span + 1));
    }
  }

  Value unknown(const CTypePtr& t) {
    if (t->is_pointer()) return Value::pointer(-1, 0);
    if (r_.strategy != Strategy::RANDOM || !t->is_integer()) return Value::integer(0);
    const auto& cfg = spec_.env.config();
    return Value::integer(random_in(cfg.min_of(t->name), cfg.max_of(t->name)));
  }

  void make_unknown(State& st, const ir::Stmt& s) {
    Value p = rvalue(st, s.a);
    Int bytes = integer(st, s.b);
    if (bytes == 0) return;
    if (p.kind != Value::Kind::Ptr || p.obj < 0) throw Fault("make_unknown on a non-pointer " + ir::render(s.a));
    Object& o = st.heap[p.obj];
    std::int64_t w = spec_.env.size_of(*o.elem);
    Int n = (bytes + w - 1) / w;
    if (p.off < 0 || p.off + n > static_cast<long>(o.cells.size()))
      throw Fault("make_unknown past the end of " + o.name);
    CTypePtr elem = o.elem;
    std::int64_t first = static_cast<std::int64_t>(p.off);
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(n); ++k) fill_unknown(st, st.heap[p.obj].cells[first + k], elem);
  }

  void fill_unknown(State& st, Value& v, const CTypePtr& t) {
    if (v.kind == Value::Kind::Struct) {
      const StructDef* sd = spec_.env.find_struct(t->name);
      for (const auto& f : sd->fields) {
        Value& fv = v.fields[f.name];
        if (fv.kind == Value::Kind::Array) {
          int obj = fv.obj;
          for (std::size_t k = 0; k < st.heap[obj].cells.size(); ++k) {
            CTypePtr e = st.heap[obj].elem;
            fill_unknown(st, st.heap[obj].cells[k], e);
          }
        } else {
          fill_unknown(st, fv, f.type);
        }
      }
      return;
    }
    v = unknown(t);
  }

  // -------------------------------------------------------- evaluation

  CTypePtr var_type(const std::string& name) const {
    auto it = types_.find(name);
    if (it == types_.end()) throw Fault("undeclared " + name);
    return it->second;
  }

  Loc lvalue(State& st, const ir::ExprPtr& e) {
    switch (e->kind) {
      case ir::Expr::Kind::Var: {
        auto it = st.vars.find(e->name);
        if (it == st.vars.end()) throw Fault("undeclared " + e->name);
        return Loc{it->second, 0, {}};
      }
      case ir::Expr::Kind::Index: {
        Value p = rvalue(st, e->kids[0]);
        Int i = integer(st, e->kids[1]);
        if (p.kind != Value::Kind::Ptr || p.obj < 0) throw Fault("indexing a non-pointer " + ir::render(e));
        Int at = p.off + i;
        if (at < 0 || at >= static_cast<long>(st.heap[p.obj].cells.size())) throw Fault("out of bounds " + ir::render(e));
        return Loc{p.obj, at, {}};
      }
      case ir::Expr::Kind::Field: {
        Loc l = lvalue(st, e->kids[0]);
        l.path.push_back(e->name);
        return l;
      }
      default: throw Fault("not a left-value: " + ir::render(e));
    }
  }

  Value& cell(State& st, const Loc& l) {
    Object& o = st.heap[l.obj];
    if (l.idx < 0 || l.idx >= static_cast<long>(o.cells.size())) throw Fault("out of bounds in " + o.name);
    Value* v = &o.cells[static_cast<std::size_t>(l.idx)];
    for (const auto& f : l.path) {
      if (v->kind != Value::Kind::Struct) throw Fault("member of a non-struct in " + o.name);
      auto it = v->fields.find(f);
      if (it == v->fields.end()) throw Fault("no member " + f);
      v = &it->second;
    }
    return *v;
  }

  void write(State& st, const Loc& l, const Value& v) {
    Value& c = cell(st, l);
    if (c.kind == Value::Kind::Array || c.kind == Value::Kind::Struct) throw Fault("assignment to an aggregate");
    c = v;
  }

  Value rvalue(State& st, const ir::ExprPtr& e) {
    using K = ir::Expr::Kind;
    switch (e->kind) {
      case K::Const: return Value::integer(e->value);
      case K::Null: return Value::null_ptr();
      case K::Var:
        if (var_type(e->name)->is_array()) return Value::pointer(st.vars.at(e->name), 0);
        [[fallthrough]];
      case K::Index:
      case K::Field: {
        const Value& v = cell(st, lvalue(st, e));
        if (v.kind == Value::Kind::Array) return Value::pointer(v.obj, 0);
        if (!v.is_init()) throw Fault("uninitialized read of " + ir::render(e));
        return v;
      }
      case K::AddrOf: {
        Loc l = lvalue(st, e->kids[0]);
        if (!l.path.empty()) throw Fault("address of a member");
        return Value::pointer(l.obj, l.idx);
      }
      case K::PtrAdd: {
        Value p = rvalue(st, e->kids[0]);
        Int k = integer(st, e->kids[1]);
        if (p.kind != Value::Kind::Ptr) throw Fault("arithmetic on a null pointer");
        p.off += k;
        return p;
      }
      case K::Binary: return Value::integer(arith(e->op, integer(st, e->kids[0]), integer(st, e->kids[1])));
      case K::Min:
      case K::Max: {
        Int a = integer(st, e->kids[0]), b = integer(st, e->kids[1]);
        return Value::integer(e->kind == K::Min ? std::min(a, b) : std::max(a, b));
      }
      case K::Cmp:
      case K::And:
      case K::Or: return Value::integer(truth(st, e) ? 1 : 0);
    }
    throw Fault("bad expression");
  }

  Int integer(State& st, const ir::ExprPtr& e) {
    Value v = rvalue(st, e);
    if (v.kind != Value::Kind::Int) throw Fault("integer expected: " + ir::render(e));
    return v.i;
  }

  bool truth(State& st, const ir::ExprPtr& e) {
    using K = ir::Expr::Kind;
    if (e->kind == K::And) {
      for (const auto& k : e->kids)
        if (!truth(st, k)) return false;
      return true;
    }
    if (e->kind == K::Or) {
      for (const auto& k : e->kids)
        if (truth(st, k)) return true;
      return false;
    }
    if (e->kind == K::Cmp) {
      Value a = rvalue(st, e->kids[0]), b = rvalue(st, e->kids[1]);
      if (a.kind == Value::Kind::Int && b.kind == Value::Kind::Int) return compare(e->cmp, a.i, b.i);
      if (e->cmp == CmpOp::Eq || e->cmp == CmpOp::Ne) {
        if ((a.kind == Value::Kind::Ptr && a.obj < 0) || (b.kind == Value::Kind::Ptr && b.obj < 0))
          throw Fault("comparison of an unknown pointer");
        return same_ptr(a, b) == (e->cmp == CmpOp::Eq);
      }
      if (a.kind == Value::Kind::Ptr && b.kind == Value::Kind::Ptr && a.obj == b.obj && a.obj >= 0)
        return compare(e->cmp, a.off, b.off);
      throw Fault("ordering of unrelated pointers");
    }
    return integer(st, e) != 0;
  }

  const ir::Program& p_;
  const TypedSpec& spec_;
  const Resolver& r_;
  std::mt19937_64 rng_;
  std::map<std::string, CTypePtr> types_;
  std::map<std::string, std::string> source_;  // driver variable -> source scalar
  RunResult out_;
};

// ---------------------------------------------------------- predicates

struct TLoc {
  int obj = -1;  // -1: parameter `param`
  std::size_t param = 0;
  Int idx;
  std::vector<std::string> path;
};

struct Failed {
  Truth t;
};

class PredEval {
 public:
  PredEval(const ConcreteState& s, const TypedSpec& spec) : s_(s), spec_(spec) {
    const auto& ps = spec.spec.target.params;
    for (std::size_t i = 0; i < ps.size(); ++i) params_[ps[i].name] = i;
  }

  Truth pred(const PredPtr& p) {
    switch (p->kind) {
      case Predicate::Kind::True: return Truth::TRUE;
      case Predicate::Kind::False: return Truth::FALSE;
      case Predicate::Kind::And: {
        bool fault = false;
        for (const auto& k : p->kids) {
          Truth t = pred(k);
          if (t == Truth::FALSE) return Truth::FALSE;
          fault = fault || t == Truth::FAULT;
        }
        return fault ? Truth::FAULT : Truth::TRUE;
      }
      case Predicate::Kind::Or: {
        bool fault = false;
        for (const auto& k : p->kids) {
          Truth t = pred(k);
          if (t == Truth::TRUE) return Truth::TRUE;
          fault = fault || t == Truth::FAULT;
        }
        return fault ? Truth::FAULT : Truth::FALSE;
      }
      case Predicate::Kind::Not: {
        Truth t = pred(p->kids[0]);
        return t == Truth::FAULT ? t : t == Truth::TRUE ? Truth::FALSE : Truth::TRUE;
      }
      case Predicate::Kind::Cmp: return guarded([&] { return cmp(p); });
      case Predicate::Kind::Defined: return guarded([&] { return defined(p->def, p->mem); });
    }
    return Truth::FAULT;
  }

 private:
  template <class F>
  Truth guarded(F f) {
    try {
      return f() ? Truth::TRUE : Truth::FALSE;
    } catch (const Failed& x) {
      return x.t;
    } catch (const Fault&) {
      return Truth::FAULT;
    }
  }

  [[noreturn]] static void fault() { throw Failed{Truth::FAULT}; }

  bool cmp(const PredPtr& p) {
    Value a = rvalue(p->lhs), b = rvalue(p->rhs);
    if (a.kind == Value::Kind::Int && b.kind == Value::Kind::Int) return compare(p->op, a.i, b.i);
    if ((a.kind == Value::Kind::Ptr && a.obj < 0) || (b.kind == Value::Kind::Ptr && b.obj < 0)) fault();
    if (p->op == CmpOp::Eq || p->op == CmpOp::Ne) return same_ptr(a, b) == (p->op == CmpOp::Eq);
    if (a.kind == Value::Kind::Ptr && b.kind == Value::Kind::Ptr && a.obj == b.obj) return compare(p->op, a.off, b.off);
    fault();
  }

  bool initialized(const Value& v) const {
    switch (v.kind) {
      case Value::Kind::Uninit: return false;
      case Value::Kind::Struct:
        for (const auto& [n, f] : v.fields)
          if (!initialized(f)) return false;
        return true;
      case Value::Kind::Array:
        for (const auto& c : s_.heap[v.obj].cells)
          if (!initialized(c)) return false;
        return true;
      default: return true;
    }
  }

  bool defined(DefKind k, const TermPtr& m) {
    Value p;
    Int lo = 0, hi = 0;
    if (m->kind == Term::Kind::Disp) {
      p = rvalue(m->kid(0));
      lo = integer(m->kid(1));
      hi = integer(m->kid(2));
      if (lo > hi) return true;
    } else {
      p = rvalue(m);
    }
    if (p.kind != Value::Kind::Ptr || p.obj < 0) return false;
    const Object& o = s_.heap[p.obj];
    Int first = p.off + lo, last = p.off + hi;
    if (first < 0 || last >= static_cast<long>(o.cells.size())) return false;
    if (k != DefKind::Initialized) return true;
    for (Int i = first; i <= last; ++i)
      if (!initialized(o.cells[static_cast<std::size_t>(i)])) return false;
    return true;
  }

  TLoc lvalue(const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Var: {
        auto p = params_.find(t->name);
        if (p != params_.end()) return TLoc{-1, p->second, 0, {}};
        auto g = s_.vars.find(t->name);
        if (g == s_.vars.end()) fault();
        return TLoc{g->second, 0, 0, {}};
      }
      case Term::Kind::Deref: {
        Value p = rvalue(t->kid(0));
        if (p.kind != Value::Kind::Ptr || p.obj < 0) fault();
        if (p.off < 0 || p.off >= static_cast<long>(s_.heap[p.obj].cells.size())) fault();
        return TLoc{p.obj, 0, p.off, {}};
      }
      case Term::Kind::Field: {
        TLoc l = lvalue(t->kid(0));
        l.path.push_back(t->name);
        return l;
      }
      default: fault();
    }
  }

  const Value& cell(const TLoc& l) {
    const Value* v = l.obj < 0 ? &s_.args.at(l.param) : &s_.heap[l.obj].cells.at(static_cast<std::size_t>(l.idx));
    for (const auto& f : l.path) {
      if (v->kind != Value::Kind::Struct) fault();
      auto it = v->fields.find(f);
      if (it == v->fields.end()) fault();
      v = &it->second;
    }
    return *v;
  }

  Value rvalue(const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Const: return Value::integer(t->value);
      case Term::Kind::Var:
      case Term::Kind::Deref:
      case Term::Kind::Field: {
        TLoc l = lvalue(t);
        // a global array designates its own object
        if (t->type && t->type->is_array() && l.obj >= 0 && l.path.empty() && t->kind == Term::Kind::Var)
          return Value::pointer(l.obj, 0);
        const Value& v = cell(l);
        if (v.kind == Value::Kind::Array) return Value::pointer(v.obj, 0);
        if (!v.is_init()) fault();
        return v;
      }
      case Term::Kind::Disp: {
        Value p = rvalue(t->kid(0));
        Int lo = integer(t->kid(1));
        if (p.kind != Value::Kind::Ptr) fault();
        p.off += lo;
        return p;
      }
      case Term::Kind::Binary: {
        Int a = integer(t->kid(0)), b = integer(t->kid(1));
        return Value::integer(arith(t->op, a, b));
      }
    }
    fault();
  }

  Int integer(const TermPtr& t) {
    Value v = rvalue(t);
    if (v.kind != Value::Kind::Int) fault();
    return v.i;
  }

  const ConcreteState& s_;
  const TypedSpec& spec_;
  std::map<std::string, std::size_t> params_;
};

}  // namespace

RunResult interpret(const ir::Program& p, const TypedSpec& spec, const Resolver& r) {
  Machine m(p, spec, r);
  return m.run();
}

Truth eval_pred(const PredPtr& p, const ConcreteState& s, const TypedSpec& spec) {
  PredEval e(s, spec);
  return e.pred(p);
}

SoundnessReport check_soundness(const TypedSpec& spec, const ir::Program& p, std::size_t n, std::uint64_t seed) {
  SoundnessReport rep;
  auto absorb = [&](const RunResult& r, const std::string& who) {
    ++rep.runs;
    rep.pruned += r.pruned;
    for (const auto& f : r.faults) rep.faults.push_back(who + ": " + f);
    for (const auto& s : r.states) {
      ++rep.states;
      Truth t = eval_pred(spec.precondition, s, spec);
      if (t != Truth::TRUE) rep.violations.push_back({who, s.path, std::string("precondition is ") + spelling(t)});
    }
  };
  for (std::size_t k = 0; k < n; ++k) {
    Resolver r;
    r.strategy = Strategy::RANDOM;
    r.seed = seed + k;
    absorb(interpret(p, spec, r), "random seed=" + std::to_string(seed + k));
  }
  Resolver ex;
  ex.strategy = Strategy::EXTREMES;
  ex.max_paths = 4096;
  absorb(interpret(p, spec, ex), "extremes");
  return rep;
}

// ------------------------------------------------------------ coverage

namespace {

struct Scalar {
  std::string name;
  bool is_param = false;
  std::size_t param = 0;
  std::vector<Int> domain;
};

std::vector<Int> project(const ConcreteState& s, const std::vector<Scalar>& scalars, bool* ok) {
  std::vector<Int> v;
  *ok = true;
  for (const auto& sc : scalars) {
    const Value* x = nullptr;
    if (sc.is_param) x = &s.args[sc.param];
    else {
      auto it = s.vars.find(sc.name);
      if (it != s.vars.end()) x = &s.heap[it->second].cells[0];
    }
    if (!x || x->kind != Value::Kind::Int) {
      *ok = false;
      return v;
    }
    v.push_back(x->i);
  }
  return v;
}

}  // namespace

CoverageReport check_coverage(const TypedSpec& spec, const ir::Program* p, const CoverageOptions& opts) {
  CoverageReport rep;
  std::vector<Scalar> scalars;
  const TargetConfig& cfg = spec.env.config();
  // Values outside the C type cannot be stored, so they are not candidates.
  auto fit = [&](const std::vector<Int>& dom, const CTypePtr& t) {
    std::vector<Int> out;
    for (const auto& v : dom)
      if (cfg.min_of(t->name) <= v && v <= cfg.max_of(t->name)) out.push_back(v);
    return out;
  };
  auto domain_of = [&](const std::string& n, const CTypePtr& t) {
    auto it = opts.domains.find(n);
    return fit(it != opts.domains.end() ? it->second : opts.default_domain, t);
  };
  const auto& params = spec.spec.target.params;
  for (std::size_t i = 0; i < params.size(); ++i)
    if (params[i].type->is_integer())
      scalars.push_back({params[i].name, true, i, domain_of(params[i].name, params[i].type)});
  for (const auto& g : spec.spec.globals)
    if (g.type->is_integer()) scalars.push_back({g.name, false, 0, domain_of(g.name, g.type)});
  for (const auto& s : scalars) rep.scalars.push_back(s.name);

  if (!p) {
    rep.vacuous = true;
    return rep;
  }

  // Reachable projection.
  Resolver r;
  r.strategy = Strategy::EXHAUSTIVE;
  r.default_domain = opts.default_domain;
  for (const auto& s : scalars) r.domains[s.name] = s.domain;
  RunResult run = interpret(*p, spec, r);
  rep.faults = run.faults;
  if (run.truncated) rep.partial = true;
  auto in_domains = [&](const std::vector<Int>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (std::find(scalars[i].domain.begin(), scalars[i].domain.end(), v[i]) == scalars[i].domain.end()) return false;
    return true;
  };
  for (const auto& s : run.states) {
    bool ok = false;
    auto v = project(s, scalars, &ok);
    if (ok && in_domains(v)) rep.reachable.insert(v);
  }

  // Brute force: heap shapes for every pointer-typed parameter and global.
  struct PtrSlot {
    bool is_param;
    std::size_t param;
    std::string name;
    CTypePtr pointee;
  };
  std::vector<PtrSlot> ptrs;
  for (std::size_t i = 0; i < params.size(); ++i)
    if (params[i].type->is_pointer()) ptrs.push_back({true, i, params[i].name, params[i].type->elem});
  for (const auto& g : spec.spec.globals)
    if (g.type->is_pointer()) ptrs.push_back({false, 0, g.name, g.type->elem});

  // Shapes of one pointer: (cells, initialized, cell values).
  struct Shape {
    int cells = 0;
    bool init = false;
    std::vector<Int> values;
  };
  const std::vector<Int>& any_cell = opts.cell_domain.empty() ? opts.default_domain : opts.cell_domain;
  std::vector<std::vector<Shape>> shapes(ptrs.size());
  for (std::size_t k = 0; k < ptrs.size(); ++k) {
    bool integral = ptrs[k].pointee->is_integer();
    std::vector<Int> cell_domain = integral ? fit(any_cell, ptrs[k].pointee) : any_cell;
    for (int c = 0; c <= opts.region_cap; ++c) {
      shapes[k].push_back({c, false, {}});
      if (c == 0) continue;
      if (!integral) {
        shapes[k].push_back({c, true, {}});
        continue;
      }
      if (cell_domain.empty()) continue;
      std::vector<std::size_t> digit(c, 0);
      for (;;) {
        Shape s{c, true, {}};
        for (auto d : digit) s.values.push_back(cell_domain[d]);
        shapes[k].push_back(std::move(s));
        int j = 0;
        while (j < c && ++digit[j] == cell_domain.size()) digit[j++] = 0;
        if (j == c) break;
      }
    }
  }

  std::size_t evals = 0;
  std::vector<std::size_t> sidx(scalars.size(), 0);
  bool no_tuple = false;
  for (const auto& s : scalars) no_tuple = no_tuple || s.domain.empty();
  while (!no_tuple) {
    std::vector<Int> tuple;
    for (std::size_t i = 0; i < scalars.size(); ++i) tuple.push_back(scalars[i].domain[sidx[i]]);
    std::vector<std::size_t> hidx(ptrs.size(), 0);
    for (bool found = false; !found;) {
      if (++evals > opts.budget) {
        rep.partial = true;
        break;
      }
      ConcreteState st;
      Store store{spec.env, st.heap};
      st.args.resize(params.size());
      for (const auto& g : spec.spec.globals) st.vars[g.name] = store.object(g.name, g.type, zero);
      for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& t = params[i].type;
        if (t->is_array()) st.args[i] = Value::pointer(store.object(params[i].name, t, zero), 0);
        else if (t->is_struct()) st.args[i] = store.value_of(t, zero);
      }
      for (std::size_t i = 0; i < scalars.size(); ++i) {
        if (scalars[i].is_param) st.args[scalars[i].param] = Value::integer(tuple[i]);
        else st.heap[st.vars[scalars[i].name]].cells[0] = Value::integer(tuple[i]);
      }
      for (std::size_t k = 0; k < ptrs.size(); ++k) {
        const Shape& sh = shapes[k][hidx[k]];
        CTypePtr elem = ptrs[k].pointee->kind == CType::Kind::Void ? CType::integer("char") : ptrs[k].pointee;
        int obj = store.object(ptrs[k].name + "[]", CType::array(elem, std::max(sh.cells, 0)),
                               sh.init ? zero : uninit);
        st.heap[obj].elem = elem;
        for (std::size_t c = 0; c < sh.values.size(); ++c) st.heap[obj].cells[c] = Value::integer(sh.values[c]);
        if (sh.init && elem->is_pointer())
          for (auto& c : st.heap[obj].cells) c = Value::pointer(-1, 0);
        Value pv = Value::pointer(obj, 0);
        if (ptrs[k].is_param) st.args[ptrs[k].param] = pv;
        else st.heap[st.vars[ptrs[k].name]].cells[0] = pv;
      }
      if (eval_pred(spec.precondition, st, spec) == Truth::TRUE) {
        rep.satisfying.insert(tuple);
        found = true;
      }
      std::size_t j = 0;
      while (j < ptrs.size() && ++hidx[j] == shapes[j].size()) hidx[j++] = 0;
      if (j == ptrs.size()) break;
    }
    if (rep.partial) break;
    std::size_t i = 0;
    while (i < scalars.size() && ++sidx[i] == scalars[i].domain.size()) sidx[i++] = 0;
    if (i == scalars.size()) break;
  }

  for (const auto& t : rep.satisfying)
    if (!rep.reachable.count(t)) rep.missing.push_back(t);
  for (const auto& t : rep.reachable)
    if (!rep.satisfying.count(t)) rep.spurious.push_back(t);
  return rep;
}

// ---------------------------------------------------------------- json

std::string to_json(const SoundnessReport& r, std::uint64_t seed) {
  nlohmann::json j;
  j["seed"] = seed;
  j["runs"] = r.runs;
  j["states"] = r.states;
  j["pruned"] = r.pruned;
  j["violations"] = nlohmann::json::array();
  for (const auto& v : r.violations) j["violations"].push_back({{"resolver", v.resolver}, {"path", v.path}, {"detail", v.detail}});
  j["faults"] = r.faults;
  j["ok"] = r.ok();
  return j.dump(2);
}

std::string to_json(const CoverageReport& r) {
  nlohmann::json j;
  auto tuples = [&](const auto& set) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& t : set) {
      nlohmann::json row = nlohmann::json::array();
      for (const auto& v : t) row.push_back(to_string(v));
      a.push_back(row);
    }
    return a;
  };
  j["scalars"] = r.scalars;
  j["vacuous"] = r.vacuous;
  j["partial"] = r.partial;
  j["satisfying"] = tuples(r.satisfying);
  j["reachable"] = tuples(r.reachable);
  j["missing"] = tuples(r.missing);
  j["spurious"] = tuples(r.spurious);
  j["faults"] = r.faults;
  j["equal"] = r.equal();
  return j.dump(2);
}

}  // namespace ctxgen::oracle
