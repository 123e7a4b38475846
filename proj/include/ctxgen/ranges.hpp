#pragma once

#include "ctxgen/symbolic.hpp"
#include "ctxgen/types.hpp"

#include <optional>
#include <string>

namespace ctxgen {

enum class Tri { FALSE, TRUE, UNKNOWN };
const char* spelling(Tri t);

/// Interval [lo; hi] over symbolic expressions (bounds may be infinite), or
/// the empty range.
class SymRange {
 public:
  static SymRange empty() { return SymRange(); }
  static SymRange of(sym::Expr lo, sym::Expr hi);
  static SymRange top() { return of(sym::neg_inf(), sym::pos_inf()); }
  static SymRange point(const sym::Expr& e) { return of(e, e); }

  bool is_empty() const { return !lo_; }
  const sym::Expr& lo() const { return lo_; }
  const sym::Expr& hi() const { return hi_; }
  bool is_top() const;

  std::string render() const;

 private:
  sym::Expr lo_, hi_;
};

bool same_range(const SymRange& a, const SymRange& b);

/// Least upper bound: [min(lo1, lo2); max(hi1, hi2)], bounds simplified.
SymRange join(const SymRange& a, const SymRange& b, const sym::Bounds* env = nullptr);
/// Greatest lower bound; EMPTY when hi < lo is proven.
SymRange meet(const SymRange& a, const SymRange& b, const sym::Bounds* env = nullptr);
/// Containment a within b. FALSE only when a is provably non-empty and one
/// bound provably escapes.
Tri leq(const SymRange& a, const SymRange& b, const sym::Bounds* env = nullptr);

/// Provably empty / provably non-empty.
bool proves_empty(const SymRange& r, const sym::Bounds* env = nullptr);
bool proves_nonempty(const SymRange& r, const sym::Bounds* env = nullptr);

/// Pointers start with no valid cell, integers with every value. Throws
/// std::invalid_argument on aggregates and arrays.
SymRange neutral(const CType& t);

/// Range of the values x with `x cop t`; cop must be Eq, Le or Ge.
SymRange ival(CmpOp cop, const sym::Expr& t);

/// Concrete interval of `r` under a valuation; nullopt when empty. Infinite
/// ends stay infinite.
struct ConcreteInterval {
  sym::ExtInt lo, hi;
  bool contains(const Int& v) const;
};
std::optional<ConcreteInterval> concretize(const SymRange& r, const sym::Valuation& v);

}  // namespace ctxgen
