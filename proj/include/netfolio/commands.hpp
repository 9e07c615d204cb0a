#pragma once

#include "netfolio/io.hpp"
#include "netfolio/run_config.hpp"

#include <iosfwd>

namespace netfolio {

// Options for the single-matrix `solve` command (no run config involved).
struct SolveOptions {
    std::filesystem::path matrix_path;  // square PSD risk matrix CSV
    std::filesystem::path mean_path;    // ticker,mean CSV; required for MV
    std::string strategy = "GMV";       // MV | GMV | ERC | MDP | EW
    std::optional<double> lambda;       // MV trade-off
    SolverConfig solver;
    std::filesystem::path output;  // optional weights CSV; stdout otherwise
};

// Canonical JSON for the effective (post-override) configuration; hashed into
// every manifest so a run can be reproduced byte for byte.
std::string run_config_to_json(const RunConfig& config);

// Per-window covariance artifacts: sample, constant-correlation and shrunk
// matrices plus a kappa table, under <output_dir>/estimate/.
int cmd_estimate(const RunConfig& config, const std::filesystem::path& workdir);

// Per-window network artifacts: W, clustering vector, C, H and the edge list,
// under <output_dir>/network/, for each estimator used by the configured specs.
int cmd_network(const RunConfig& config, const std::filesystem::path& workdir);

// One allocation on a matrix read from CSV; weights to `out` (and optionally
// a file).
int cmd_solve(const SolveOptions& options, std::ostream& out);

// The full experiment: suite over all specs, per-spec weights/returns/
// cumulative CSVs, summary table (CSV + JSON) and the run manifest. Returns 0
// when every spec succeeded, otherwise the exit code of the first failure.
int cmd_backtest(const RunConfig& config, const std::filesystem::path& workdir);

// Rebuilds the summary table from the per-spec return series already on disk
// and prints it to `out`.
int cmd_report(const RunConfig& config, const std::filesystem::path& workdir, std::ostream& out);

}  // namespace netfolio
