#include "ctxgen/constraints.hpp"

#include <algorithm>
#include <sstream>

namespace ctxgen {

std::vector<LValue> RuntimeCheck::symbols() const {
  std::vector<LValue> out;
  for (const auto& a : atoms)
    for (const auto& e : {a.lhs, a.rhs})
      for (const auto& l : sym::symbols(e))
        if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  return out;
}

std::string render(const RuntimeCheck& c) {
  std::string s = "RTC(";
  for (std::size_t i = 0; i < c.atoms.size(); ++i) {
    if (i) s += " || ";
    const auto& a = c.atoms[i];
    s += sym::render(a.lhs) + " " + spelling(a.op) + " " + sym::render(a.rhs);
  }
  return s + ")";
}

bool holds(const RuntimeCheck& c, const sym::Valuation& v) {
  for (const auto& a : c.atoms) {
    auto l = sym::valuate(a.lhs, v), r = sym::valuate(a.rhs, v);
    bool ok = a.op == CmpOp::Eq ? l == r : a.op == CmpOp::Le ? l <= r : r <= l;
    if (ok) return true;
  }
  return false;
}

StateConstraint StateConstraint::fresh(const CTypePtr& t) {
  StateConstraint c;
  c.ctype = t;
  c.range = t->is_integer() ? SymRange::top() : SymRange::empty();
  c.init = SymRange::empty();
  return c;
}

bool StateConstraint::add_check(const RuntimeCheck& c) {
  std::string key = render(c);
  for (const auto& x : checks)
    if (render(x) == key) return false;
  checks.push_back(c);
  return true;
}

const StateConstraint* SigmaMap::find(const LValue& l) const {
  auto it = index_.find(l.key());
  return it == index_.end() ? nullptr : &entries_[it->second].second;
}

const StateConstraint& SigmaMap::at(const LValue& l) const {
  if (auto* c = find(l)) return *c;
  throw std::out_of_range("no constraint for " + l.key());
}

SigmaMap SigmaMap::updated(const LValue& l, StateConstraint c) const {
  SigmaMap s = *this;
  s.set(l, std::move(c));
  return s;
}

void SigmaMap::set(const LValue& l, StateConstraint c) {
  auto it = index_.find(l.key());
  if (it != index_.end()) {
    entries_[it->second].second = std::move(c);
    return;
  }
  index_[l.key()] = entries_.size();
  entries_.emplace_back(l, std::move(c));
}

std::string dump_line(const LValue& l, const StateConstraint& c) {
  std::string s = l.key() + " : " + c.ctype->spelling() + " = " + c.range.render() + " ⊕ {";
  for (std::size_t i = 0; i < c.checks.size(); ++i) s += (i ? ", " : "") + render(c.checks[i]);
  s += "} kinds={";
  bool first = true;
  for (auto k : c.kinds) {
    s += (first ? "" : ",") + std::string(spelling(k));
    first = false;
  }
  s += "}";
  if (!c.init.is_empty()) s += " init=" + c.init.render();
  return s;
}

std::string SigmaMap::dump() const {
  std::string s;
  for (const auto& [l, c] : entries_) s += dump_line(l, c) + "\n";
  return s;
}

std::uint64_t SigmaMap::digest() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {
std::string path_text(const std::vector<LValue>& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? " -> " : "") + p[i].key();
  return s;
}
}  // namespace

CycleError::CycleError(std::vector<LValue> p) : std::runtime_error("dependency cycle: " + path_text(p)), path(std::move(p)) {}

void DepGraph::add_node(const LValue& l) {
  if (has_node(l)) return;
  index_[l.key()] = nodes_.size();
  nodes_.push_back(l);
  succ_.emplace_back();
}

bool DepGraph::has_edge(const LValue& from, const LValue& to) const {
  auto a = index_.find(from.key()), b = index_.find(to.key());
  if (a == index_.end() || b == index_.end()) return false;
  const auto& s = succ_[a->second];
  return std::find(s.begin(), s.end(), b->second) != s.end();
}

std::optional<std::vector<LValue>> DepGraph::path(const LValue& from, const LValue& to) const {
  auto a = index_.find(from.key()), b = index_.find(to.key());
  if (a == index_.end() || b == index_.end()) return std::nullopt;
  // BFS with parents, so the reported path is a shortest one.
  std::vector<long> parent(nodes_.size(), -2);
  std::vector<std::size_t> queue{a->second};
  parent[a->second] = -1;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::size_t u = queue[qi];
    if (u == b->second) {
      std::vector<LValue> p;
      for (long x = static_cast<long>(u); x >= 0; x = parent[x]) p.push_back(nodes_[x]);
      std::reverse(p.begin(), p.end());
      return p;
    }
    for (std::size_t v : succ_[u])
      if (parent[v] == -2) {
        parent[v] = static_cast<long>(u);
        queue.push_back(v);
      }
  }
  return std::nullopt;
}

bool DepGraph::reaches(const LValue& from, const LValue& to) const { return path(from, to).has_value(); }

void DepGraph::add_dependency(const LValue& from, const std::vector<LValue>& to) {
  DepGraph g = *this;
  g.add_node(from);
  for (const auto& t : to) {
    if (t == from) throw CycleError({from, from});
    g.add_node(t);
    if (g.has_edge(from, t)) continue;
    if (auto p = g.path(t, from)) {
      p->push_back(t);
      throw CycleError(*p);
    }
    g.succ_[g.index_[from.key()]].push_back(g.index_[t.key()]);
  }
  *this = std::move(g);
}

DepGraph DepGraph::with_dependency(const LValue& from, const std::vector<LValue>& to) const {
  DepGraph g = *this;
  g.add_dependency(from, to);
  return g;
}

std::vector<LValue> DepGraph::deps(const LValue& l) const {
  std::vector<LValue> out;
  auto it = index_.find(l.key());
  if (it == index_.end()) return out;
  for (std::size_t v : succ_[it->second]) out.push_back(nodes_[v]);
  return out;
}

std::vector<std::pair<LValue, LValue>> DepGraph::edges() const {
  std::vector<std::pair<LValue, LValue>> out;
  for (std::size_t u = 0; u < nodes_.size(); ++u)
    for (std::size_t v : succ_[u]) out.emplace_back(nodes_[u], nodes_[v]);
  return out;
}

std::string DepGraph::to_dot() const {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q + "\"";
  };
  std::ostringstream os;
  os << "digraph deps {\n";
  for (const auto& n : nodes_) os << "  " << quote(n.key()) << ";\n";
  for (const auto& [a, b] : edges()) os << "  " << quote(a.key()) << " -> " << quote(b.key()) << ";\n";
  os << "}\n";
  return os.str();
}

std::optional<Alias> alias_of(const StateConstraint& c) {
  if (!c.ctype || !c.ctype->is_pointerish()) throw std::invalid_argument("alias_of on a non-pointer constraint");
  if (c.ctype->is_array() || c.range.is_empty() || !sym::same(c.range.lo(), c.range.hi())) return std::nullopt;
  auto sp = sym::split_pointer(c.range.lo());
  if (!sp) return std::nullopt;
  return Alias{sp->first, sp->second};
}

LValue tbase(const TermPtr& m) {
  if (m->is_lvalue()) return LValue(m);
  if (m->kind == Term::Kind::Disp && same_term(*m->kid(1), *m->kid(2)) && m->kid(0)->is_lvalue())
    return LValue(m->kid(0));
  throw std::invalid_argument("not a single displacement: " + render(m));
}

TermPtr toffset(const TermPtr& m) {
  if (m->is_lvalue()) return make_const(0, m->pos, CType::logic_integer());
  if (m->kind == Term::Kind::Disp && same_term(*m->kid(1), *m->kid(2))) return m->kid(1);
  throw std::invalid_argument("not a single displacement: " + render(m));
}

}  // namespace ctxgen
