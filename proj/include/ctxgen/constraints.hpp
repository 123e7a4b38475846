#pragma once

#include "ctxgen/ast.hpp"
#include "ctxgen/ranges.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ctxgen {

/// One comparison `lhs cop rhs` over integer symbolic expressions.
struct CheckAtom {
  CmpOp op = CmpOp::Le;  // Eq, Le or Ge
  sym::Expr lhs, rhs;
};

/// A comparison deferred to the generated code. Usually one atom; several
/// atoms form a disjunction (e.g. "the index is 0 or higher, unless the
/// displacement range is empty").
struct RuntimeCheck {
  std::vector<CheckAtom> atoms;

  static RuntimeCheck of(CmpOp op, sym::Expr lhs, sym::Expr rhs) { return {{CheckAtom{op, std::move(lhs), std::move(rhs)}}}; }
  /// Left-value symbols read by the check.
  std::vector<LValue> symbols() const;
};

std::string render(const RuntimeCheck& c);  // RTC(a <= b || ...)

/// Does `c` hold under the valuation? Throws sym::EvalError.
bool holds(const RuntimeCheck& c, const sym::Valuation& v);

/// R ⊕ X for one left-value, plus the definedness kinds required of its
/// region and the sub-range required to be initialized.
struct StateConstraint {
  CTypePtr ctype;
  SymRange range;
  std::vector<RuntimeCheck> checks;  // deduplicated by rendering, insertion order
  std::set<DefKind> kinds;
  SymRange init;  // pointers only: cells that must be initialized

  static StateConstraint fresh(const CTypePtr& t);
  /// Returns false when an equal check (by rendering) is already present.
  bool add_check(const RuntimeCheck& c);
};

/// Σ: left-values to constraints, in insertion order.
class SigmaMap {
 public:
  bool contains(const LValue& l) const { return index_.count(l.key()) != 0; }
  const StateConstraint* find(const LValue& l) const;
  const StateConstraint& at(const LValue& l) const;

  /// Functional update.
  SigmaMap updated(const LValue& l, StateConstraint c) const;
  void set(const LValue& l, StateConstraint c);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<std::pair<LValue, StateConstraint>>& entries() const { return entries_; }

  /// One line per entry: `lvalue : ctype = [lo; hi] ⊕ {RTC...} kinds={...}`.
  std::string dump() const;
  /// FNV-1a of dump().
  std::uint64_t digest() const;

 private:
  std::vector<std::pair<LValue, StateConstraint>> entries_;
  std::map<std::string, std::size_t> index_;
};

std::string dump_line(const LValue& l, const StateConstraint& c);

struct CycleError : std::runtime_error {
  std::vector<LValue> path;  // first == last
  explicit CycleError(std::vector<LValue> p);
};

/// Edge L -> L' means L' must be initialized before L. Kept acyclic.
class DepGraph {
 public:
  void add_node(const LValue& l);
  /// Inserts every edge from -> t, or none of them. Throws CycleError naming
  /// the cycle the first offending edge would close.
  void add_dependency(const LValue& from, const std::vector<LValue>& to);
  /// Functional variant.
  DepGraph with_dependency(const LValue& from, const std::vector<LValue>& to) const;

  bool has_node(const LValue& l) const { return index_.count(l.key()) != 0; }
  bool has_edge(const LValue& from, const LValue& to) const;
  bool reaches(const LValue& from, const LValue& to) const;
  const std::vector<LValue>& nodes() const { return nodes_; }
  /// Successors (dependencies) of `l`, in insertion order.
  std::vector<LValue> deps(const LValue& l) const;
  std::vector<std::pair<LValue, LValue>> edges() const;

  std::string to_dot() const;

 private:
  std::optional<std::vector<LValue>> path(const LValue& from, const LValue& to) const;

  std::vector<LValue> nodes_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> succ_;
};

/// [M; M] alias view of a pointer constraint: M = base + offset.
struct Alias {
  LValue base;
  sym::Expr offset;
};

/// Throws std::invalid_argument for non-pointer constraints.
std::optional<Alias> alias_of(const StateConstraint& c);

/// Decomposition of a left-value or single displacement M = L ++ (T..T).
/// Throws std::invalid_argument on a displacement range with lo != hi.
LValue tbase(const TermPtr& m);
TermPtr toffset(const TermPtr& m);

}  // namespace ctxgen
