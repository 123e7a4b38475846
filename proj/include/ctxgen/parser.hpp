#pragma once

#include "ctxgen/ast.hpp"

#include <string>

namespace ctxgen {

/// Parses one input file: typedefs, globals and exactly one annotated
/// function declaration. Throws FrontendError.
SpecFile parse_source(const std::string& text, const std::string& filename = "<input>");

/// Prints a SpecFile back in the input grammar. Integer aliases are printed
/// but uses are spelled with the resolved kind.
std::string print_spec(const SpecFile& spec);

}  // namespace ctxgen
