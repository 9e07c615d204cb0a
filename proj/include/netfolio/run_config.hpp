#pragma once

#include "netfolio/backtest.hpp"

#include <filesystem>

namespace netfolio {

struct DataConfig {
    std::string path;
    CsvFormat format = CsvFormat::Wide;
    bool is_returns = false;  // true: the CSV already holds log-returns
};

struct MetricsConfig {
    double risk_free = 0.0;        // per-day mu_f for the Sharpe ratio
    double omega_threshold = 0.0;  // eps for the Omega ratio
    std::string ir_reference = "EW";
};

// One experiment, loadable from JSON. Schema (all sections optional unless
// noted):
//   data:     { path (required), format: "wide"|"long", kind: "prices"|"returns" }
//   tickers:  [ ... ]            subset filter, applied in the given order
//   window:   { in_sample, out_sample (required),
//               unit: "trading_days"|"calendar_months", allow_partial_tail }
//   specs:    "model_table"  (expands to the 17 model rows using `lambda`)
//             or [ { label, strategy: "MV"|"GMV"|"ERC"|"MDP"|"EW",
//                    estimator: "sample"|"shrinkage",
//                    risk_model: "standard"|"network", lambda } ]
//   lambda:   MV trade-off used by the "model_table" expansion
//   solver:   { kkt_tolerance, max_iterations, erc_tolerance }
//   metrics:  { risk_free, omega_threshold, ir_reference }
//   network:  { normalization: "averaged"|"integral" }
//   backtest: { rebalance_daily }
//   output_dir, threads
struct RunConfig {
    DataConfig data;
    std::vector<std::string> tickers;
    BacktestConfig backtest;
    std::vector<StrategySpec> specs;
    MetricsConfig metrics;
    std::string output_dir = "out";
};

// Parses and validates; all errors are ConfigError with the offending field.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& json_text, const std::string& origin);

// Cross-field checks: spec labels unique and valid, IR reference resolvable
// (a listed spec label, or "EW" which is then run implicitly for the
// reference series), window lengths positive.
void validate_run_config(const RunConfig& config);

// Loads the panel the config points at (prices -> log-returns, or returns
// directly) and applies the ticker filter.
ReturnPanel load_panel(const RunConfig& config, const std::filesystem::path& workdir);

// Column subset in filter order; unknown or duplicate tickers are errors.
ReturnPanel filter_tickers(const ReturnPanel& panel, const std::vector<std::string>& keep);

}  // namespace netfolio
