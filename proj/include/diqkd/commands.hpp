#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "diqkd/run_config.hpp"

namespace diqkd::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitBoundViolation = 3;

struct GridSpec {
  double start = 0;
  double stop = 0;
  std::int64_t steps = 0;
};

/// "start:stop:steps" with steps >= 1; steps = 1 yields just {start}.
GridSpec parse_grid(const std::string& text);

std::vector<double> grid_points(const GridSpec& grid);

/// Key-length report for the configured tolerances. Prints one
/// "name value" pair per line (doubles at full precision) and writes the
/// same report as JSON to the configured output file. Returns kExitOk when
/// feasible, kExitInfeasible otherwise.
int cmd_rate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Sweeps eta_tol across the grid. CSV goes to the configured output file,
/// otherwise to `out`.
int cmd_sweep(const RunConfig& cfg, const GridSpec& grid, std::ostream& out,
              std::ostream& err);

/// Full protocol run: rounds until the blocks fill, estimation, and (when
/// not aborted) reconciliation, verification, and privacy amplification.
/// Writes transcript.txt, report.json and key files to the output
/// directory (default "."). Returns kExitInfeasible on abort, zero key, or
/// an exhausted round budget.
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Monte Carlo coverage checks for the tail bounds plus Toeplitz
/// two-universality checks (one exhaustive, one sampled). Returns
/// kExitBoundViolation if any check fails; fewer than 10^4 trials is
/// reported as insufficient statistics and skipped rather than failed.
int cmd_verify_bounds(std::int64_t trials, std::uint64_t seed, std::ostream& out,
                      std::ostream& err);

}  // namespace diqkd::cli
