#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ctxgen {

struct Pos {
  int line = 0;
  int col = 0;
};

enum class Severity { Error, Warning, Note };

/// Category of a frontend failure. Unsupported marks constructs outside the
/// accepted fragment (quantifiers, casts, ...), which are not syntax errors.
enum class ErrorKind { Syntax, Unsupported, Type, Resource };

struct Diagnostic {
  Severity severity = Severity::Error;
  Pos pos;
  std::string message;
};

/// Renders `file:line:col: severity: message`.
std::string format_diagnostic(const std::string& file, const Diagnostic& d);

class FrontendError : public std::runtime_error {
 public:
  FrontendError(ErrorKind kind, Pos pos, const std::string& message);

  ErrorKind kind() const { return kind_; }
  const Diagnostic& diagnostic() const { return diag_; }

 private:
  ErrorKind kind_;
  Diagnostic diag_;
};

}  // namespace ctxgen
