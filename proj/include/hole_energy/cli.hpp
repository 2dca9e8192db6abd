#pragma once

#include "hole_energy/errors.hpp"

#include <iosfwd>

namespace hole::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failed_check = 1;
inline constexpr int exit_config = 2;
inline constexpr int exit_convergence = 3;
inline constexpr int exit_domain = 4;
inline constexpr int exit_estimation = 5;

[[nodiscard]] int exit_code_for(ErrorKind kind) noexcept;

/// Parses argv, runs one command, writes the JSON report to `out` (and to
/// files named by --json/--csv). Failures print an error record to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hole::cli
