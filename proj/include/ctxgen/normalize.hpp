#pragma once

#include "ctxgen/ast.hpp"

#include <cstddef>
#include <vector>

namespace ctxgen {

/// Constant folding, offset merging, nested displacement collapse,
/// `L ++ (0..0)` -> L, and strict comparisons rewritten to non-strict ones.
/// Input must be typed; the result is typed and idempotent under this pass.
TermPtr normalize_term(const TermPtr& t);
PredPtr normalize_terms(const PredPtr& p);

/// A predicate without connectives. Positive literals are comparisons
/// (never `!=` on integers, never strict) and defined(M). Negative literals
/// are defined(M) or a pointer equality.
struct Literal {
  bool positive = true;
  PredPtr atom;  // Cmp or Defined

  bool is_defined() const { return atom->kind == Predicate::Kind::Defined; }
  bool is_pointer_cmp() const;
};

std::string render(const Literal& l);

using ConjunctiveClause = std::vector<Literal>;

/// Rewrites a typed predicate into disjunctive normal form. Within each clause
/// the order is: positive literals, pointer disequalities, negated defined(M).
/// Throws FrontendError(Resource) when more than `max_disjuncts` clauses would
/// be produced.
std::vector<ConjunctiveClause> to_dnf(const PredPtr& p, std::size_t max_disjuncts = 64);

}  // namespace ctxgen
