#pragma once

#include <iosfwd>

namespace pptcanon::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kFailed = 1,           // verify rejected the certificate; selftest had a failing criterion
  kNotPpt = 2,
  kHypothesisNotMet = 3,
  kUsage = 64,
  kDataError = 65,       // malformed file, or a matrix that is not a valid state
  kIoError = 74,
};

/// Entry point behind the `pptcanon` executable. Output goes to `out`,
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pptcanon::cli
