#pragma once

#include "ctxgen/ast.hpp"
#include "ctxgen/types.hpp"

#include <map>
#include <string>

namespace ctxgen {

/// A SpecFile whose clause terms all carry types. Pointer arithmetic has been
/// rewritten into displacements (`p + i` is `p ++ (i..i)`).
struct TypedSpec {
  SpecFile spec;
  TypeEnv env;
  /// Parameters and globals by name.
  std::map<std::string, CTypePtr> vars;
  /// Conjunction of every requires clause, in source order.
  PredPtr precondition;

  bool is_param(const std::string& name) const;
  bool is_global(const std::string& name) const;
};

/// Throws FrontendError (kind Type or Unsupported).
TypedSpec typecheck(const SpecFile& spec, const TargetConfig& cfg);

}  // namespace ctxgen
