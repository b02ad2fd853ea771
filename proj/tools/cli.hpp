#pragma once

#include <ostream>

namespace soflqr::cli {

enum ExitCode : int {
  kConverged = 0,
  kNotConverged = 2,
  kParseError = 3,
  kInfeasibleInput = 4,
  kNumericalFailure = 5,
  kCheckFailed = 6,
};

inline constexpr double kGradientCheckThreshold = 1e-5;
inline constexpr double kHessianCheckThreshold = 1e-4;

/// Runs the command line in-process. argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace soflqr::cli
