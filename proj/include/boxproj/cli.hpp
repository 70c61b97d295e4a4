#ifndef BOXPROJ_CLI_HPP
#define BOXPROJ_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

#include "boxproj/montecarlo.hpp"

namespace boxproj {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;  // bad arguments or invalid parameters
inline constexpr int kExitIo = 3;     // filesystem failure

/// Entry point behind the boxproj binary: parses `args` (without the program
/// name), runs one subcommand and reports through the given streams. Never
/// throws; all failures map to the exit codes above.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Line chart of separation probability against r, one polyline per
/// dimension, with confidence whiskers. Standalone SVG document.
std::string svg_sweep_chart(const SweepTable& table);

}  // namespace boxproj

#endif  // BOXPROJ_CLI_HPP
