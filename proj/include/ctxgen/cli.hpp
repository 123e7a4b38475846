#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ctxgen::cli {

/// Exit statuses.
enum Status {
  OK = 0,
  INFERENCE_FAILED = 1,  // every disjunct failed
  FRONTEND_ERROR = 2,    // parse, type or usage error
  IO_ERROR = 3,
  CHECK_FAILED = 4,      // --check found violations or interpreter faults
};

/// Runs the tool; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ctxgen::cli
