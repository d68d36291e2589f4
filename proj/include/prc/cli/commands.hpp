#pragma once

// Command-line front end. Every command reads an experiment directory or a
// record file and writes only under `<dir>/output/` or an explicit --out path.
// Human-readable output goes to `out`; failures produce exactly one JSON line
// on `err` and a stable exit code.

#include <iosfwd>
#include <string>
#include <vector>

#include "prc/error.hpp"

namespace prc::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kNumericalFailure = 3,
  kRefusal = 4,
};

int exit_code_for(const Error& e);

/// Runs one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Backend named by PRC_BACKEND; unset means "cpu".
std::string backend_name();

}  // namespace prc::cli
