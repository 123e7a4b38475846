#pragma once

#include "ctxgen/constraints.hpp"
#include "ctxgen/normalize.hpp"
#include "ctxgen/types.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ctxgen {

enum class FailureCause { INCONSISTENT, CYCLE, UNSUPPORTED };
const char* spelling(FailureCause c);

struct InferenceFailure {
  FailureCause cause = FailureCause::UNSUPPORTED;
  std::string literal;  // rendering of the offending literal
  Pos pos;
  std::string explanation;
  bool budget_exceeded = false;
  std::vector<LValue> cycle;  // CYCLE only
};

/// Thrown by the single-rule entry points of InferenceEngine.
class InferenceError : public std::runtime_error {
 public:
  explicit InferenceError(InferenceFailure f);
  const InferenceFailure& failure() const { return failure_; }

 private:
  InferenceFailure failure_;
};

/// One event of a derivation: a Σ update, edge insertions, or a verdict that
/// left Σ unchanged. `rule` is the innermost rule being applied.
struct DerivationStep {
  std::string rule;
  std::string literal;
  std::uint64_t before = 0, after = 0;
  std::optional<std::pair<LValue, StateConstraint>> update;
  std::vector<std::pair<LValue, LValue>> edges;
};

struct Derivation {
  std::vector<DerivationStep> steps;
  /// Numbered trace, one step per line.
  std::string render() const;
};

/// Re-applies the recorded updates and edges from an empty Σ and checks every
/// recorded digest. Returns false on the first mismatch.
bool replay(const Derivation& d, SigmaMap* sigma = nullptr, DepGraph* graph = nullptr);

/// Rule engine over one conjunctive clause. The entry points throw
/// InferenceError; the state is left as it was when the rule failed.
class InferenceEngine {
 public:
  InferenceEngine(const TypeEnv& env, std::size_t step_budget);
  ~InferenceEngine();
  InferenceEngine(const InferenceEngine&) = delete;
  InferenceEngine& operator=(const InferenceEngine&) = delete;

  /// Names the literal being processed, for traces and failure reports.
  void set_literal(const std::string& text, Pos pos = {});

  void simplify_defined(const TermPtr& m, DefKind kind);
  /// Integer comparison; cop in Eq, Le, Ge.
  void simplify_cmp(const TermPtr& t1, CmpOp cop, const TermPtr& t2);
  void simplify_memeq(const TermPtr& m1, const TermPtr& m2);
  /// Negative literals, after every positive one. Not-Defined literals are
  /// decided in `finish_negatives` so that prerequisites of all of them are
  /// in Σ before any is checked.
  void check_negative(const Literal& lit);
  void finish_negatives();

  const SigmaMap& sigma() const;
  const DepGraph& graph() const;
  const Derivation& derivation() const;
  std::size_t steps_used() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct InferenceOptions {
  /// 0 selects 50 * (literals + 1) * (max term depth + 1).
  std::size_t step_budget = 0;
};

struct InferenceResult {
  std::optional<InferenceFailure> failure;
  SigmaMap sigma;
  DepGraph graph;
  Derivation derivation;
  /// Left-values of the clause in first-mention order.
  std::vector<LValue> mentions;
  std::size_t steps_used = 0;
  std::size_t step_budget = 0;

  bool ok() const { return !failure.has_value(); }
};

/// The And rule: threads Σ through the literals from Σ = ∅. Pointer
/// equalities go first among positives, then the remaining positives in
/// order, then pointer disequalities, then negated defined(M). Never throws.
InferenceResult simplify_clause(const ConjunctiveClause& clause, const TypeEnv& env, const InferenceOptions& opts = {});

}  // namespace ctxgen
