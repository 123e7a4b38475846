#pragma once

#include "ctxgen/inference.hpp"
#include "ctxgen/ir.hpp"
#include "ctxgen/typecheck.hpp"

#include <string>
#include <vector>

namespace ctxgen {

/// Initialization order: a topological order of the dependency graph in
/// which, among the ready left-values, those carrying runtime checks come
/// first (their guards prune early) and ties follow first mention in the
/// clause.
std::vector<LValue> order_lvalues(const SigmaMap& sigma, const DepGraph& graph, const std::vector<LValue>& mentions);

/// Driver for the disjunction of the given (successful) clause results.
/// One clause gives a straight-line driver; two or more share the fragments
/// that are identical in every clause and branch on a fresh range variable.
/// Throws std::invalid_argument when `clauses` is empty or holds a failure.
ir::Program generate(const TypedSpec& spec, const std::vector<const InferenceResult*>& clauses);

/// Driver for a single clause.
ir::Program gen_clause(const TypedSpec& spec, const InferenceResult& clause);

enum class EmitStyle { FRAMAC, GENERIC };

/// Self-contained C translation unit: includes, primitive declarations,
/// typedefs, extern globals, the target prototype and the driver.
std::string emit_c(const ir::Program& p, const TypedSpec& spec, EmitStyle style);

/// Declarations of the GENERIC primitives (ctxgen_range_<kind>, ctxgen_make_unknown).
std::string generic_header(const TargetConfig& cfg);

}  // namespace ctxgen
