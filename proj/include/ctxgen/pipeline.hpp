#pragma once

#include "ctxgen/inference.hpp"
#include "ctxgen/normalize.hpp"
#include "ctxgen/typecheck.hpp"

#include <string>
#include <vector>

namespace ctxgen {

/// Frontend and inference results for one input file.
struct Analysis {
  TypedSpec typed;
  PredPtr normalized;  // precondition after normalize_terms
  std::vector<ConjunctiveClause> clauses;
  std::vector<InferenceResult> results;  // one per clause

  std::size_t succeeded() const;
};

/// parse -> typecheck -> normalize -> DNF -> per-clause inference. Throws
/// FrontendError on parse, type and resource errors.
Analysis analyze(const std::string& text, const TargetConfig& cfg, std::size_t max_disjuncts = 64,
                 const std::string& filename = "<input>");

}  // namespace ctxgen
