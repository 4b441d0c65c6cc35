#pragma once

#include <ostream>

namespace pathlogic::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailures = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitIoError = 3;

/// Subcommands: generate, sample, validate, reference, evaluate, report.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pathlogic::cli
