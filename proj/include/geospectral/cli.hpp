#pragma once

#include <exception>
#include <iosfwd>
#include <optional>
#include <string>

namespace geospectral::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  // I/O, parse errors, failed verification
  kNotDiagonalizable = 2,
  kNoConvergence = 3,
  kUsage = 64,
};

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr const char* kToleranceEnv = "GEOSPECTRAL_TOL";

/// Flag beats environment beats default. A malformed environment value is an
/// InvalidInputError.
double resolve_tolerance(std::optional<double> flag, const char* env_value,
                         double fallback = kDefaultTolerance);

int exit_code_for(const std::exception& e);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geospectral::cli
