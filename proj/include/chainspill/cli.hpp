#pragma once

namespace chainspill::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitPartial = 2;
inline constexpr int kExitUsage = 64;

/// Parses argv, runs one verb and maps the outcome to an exit status.
int dispatch(int argc, const char* const* argv);

}  // namespace chainspill::cli
