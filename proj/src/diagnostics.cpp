#include "ctxgen/diagnostics.hpp"

namespace ctxgen {

std::string format_diagnostic(const std::string& file, const Diagnostic& d) {
  const char* sev = d.severity == Severity::Error ? "error" : d.severity == Severity::Warning ? "warning" : "note";
  return file + ":" + std::to_string(d.pos.line) + ":" + std::to_string(d.pos.col) + ": " + sev + ": " + d.message;
}

namespace {
std::string prefix_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::Syntax: return "syntax error: ";
    case ErrorKind::Unsupported: return "unsupported feature: ";
    case ErrorKind::Type: return "type error: ";
    case ErrorKind::Resource: return "resource limit: ";
  }
  return "";
}
}  // namespace

FrontendError::FrontendError(ErrorKind kind, Pos pos, const std::string& message)
    : std::runtime_error(prefix_for(kind) + message), kind_(kind) {
  diag_.severity = Severity::Error;
  diag_.pos = pos;
  diag_.message = prefix_for(kind) + message;
}

}  // namespace ctxgen
