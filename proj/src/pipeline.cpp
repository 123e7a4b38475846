#include "ctxgen/pipeline.hpp"

#include "ctxgen/parser.hpp"

namespace ctxgen {

std::size_t Analysis::succeeded() const {
  std::size_t n = 0;
  for (const auto& r : results) n += r.ok() ? 1 : 0;
  return n;
}

Analysis analyze(const std::string& text, const TargetConfig& cfg, std::size_t max_disjuncts,
                 const std::string& filename) {
  Analysis a;
  a.typed = typecheck(parse_source(text, filename), cfg);
  a.normalized = normalize_terms(a.typed.precondition);
  a.clauses = to_dnf(a.normalized, max_disjuncts);
  for (const auto& c : a.clauses) a.results.push_back(simplify_clause(c, a.typed.env));
  return a;
}

}  // namespace ctxgen
