#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "meanfix_cli/config.hpp"

namespace meanfix::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitMaxIter = 2;
inline constexpr int kExitCheckFailed = 3;

struct GlobalOptions {
  std::optional<std::uint64_t> seed; // overrides the config seed
  int workers = 1;
  std::string out_dir = ".";
};

/// Writes the field CSV, its lattice sidecar and the solve JSON.
/// 0 when converged, 2 when max_iter was reached.
int cmd_solve(const RunConfig &config, const GlobalOptions &opts, std::ostream &out);

/// Prints beta_max, lambda_max and the violations as JSON. 0 when admissible, 1 otherwise.
int cmd_validate(const RunConfig &config, std::ostream &out);

/// suite: comparison | hull | regularity | operators. Prints and writes the
/// verdict JSON; 3 when any verdict fails.
int cmd_check(const RunConfig &config, const std::string &suite, const GlobalOptions &opts, std::ostream &out);

/// Convergence traces and the equicontinuity report.
int cmd_report(const RunConfig &config, const GlobalOptions &opts, std::ostream &out);

/// Full command line: parses arguments, sets up logging, dispatches, maps
/// exceptions to exit code 1.
int run(int argc, char **argv);

} // namespace meanfix::cli
