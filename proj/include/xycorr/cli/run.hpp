#pragma once

#include <iosfwd>

#include "xycorr/cli/config.hpp"

namespace xycorr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Executes one command and writes its files into config.output_dir.
/// Returns kExitNumerical when --strict is set and a run is flagged
/// non-converged.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point: parses flags (and --config files), then
/// runs. Never throws.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace xycorr::cli
