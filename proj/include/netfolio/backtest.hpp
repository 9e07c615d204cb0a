#pragma once

#include "netfolio/metrics.hpp"
#include "netfolio/optimizers.hpp"

#include <optional>

namespace netfolio {

enum class Strategy { MV, GMV, ERC, MDP, EW };

std::string strategy_name(Strategy s);

// One allocation model: a strategy plus the estimator and risk-model choices,
// labeled like the model table rows ("S-sample MV", "NB-shrinkage GMV", "EW").
struct StrategySpec {
    std::string label;
    Strategy strategy = Strategy::GMV;
    EstimatorKind estimator = EstimatorKind::Sample;  // Sample or Shrinkage
    RiskKind risk_model = RiskKind::Standard;
    std::optional<double> lambda;  // present iff strategy == MV

    // EW ignores estimator and risk model entirely.
};

// Throws ConfigError when lambda presence/range does not match the strategy.
void validate_spec(const StrategySpec& spec);

// The 16 estimator x risk-model x strategy combinations plus EW, in model
// table order (MV, MDP, ERC, GMV blocks; S-sample, S-shrinkage, NB-sample,
// NB-shrinkage within each block; EW last). lambda applies to the MV rows.
std::vector<StrategySpec> model_table(double lambda);

struct BacktestConfig {
    int in_sample = 0;   // n, in window units
    int out_sample = 0;  // k, in window units
    WindowUnit unit = WindowUnit::TradingDays;
    bool allow_partial_tail = false;
    // Sensitivity switch: re-fix weights to the window optimum every day
    // instead of letting them drift buy-and-hold. Off by default.
    bool rebalance_daily = false;
    SolverConfig solver;
    ClusteringNormalization normalization = ClusteringNormalization::Averaged;
    int threads = 0;  // suite parallelism; 0 = hardware concurrency
};

struct WindowAllocation {
    WindowPair window;
    Allocation allocation;
};

struct BacktestResult {
    StrategySpec spec;
    std::vector<WindowAllocation> windows;
    std::vector<Date> dates;  // of the concatenated out-of-sample days
    Vector oos_returns;       // daily portfolio simple returns
    Vector cumulative;        // wealth, starting from 1
};

// Estimate the mean and build the risk model for one in-sample window:
// the chosen covariance estimate feeds either the standard model (Sigma
// itself) or the network model (correlation network -> integrated clustering
// -> C -> H), always with sample volatilities.
std::pair<MeanEstimate, RiskModel> build_inputs(const ReturnPanel& panel,
                                                const WindowPair& window,
                                                const StrategySpec& spec,
                                                ClusteringNormalization normalization);

// Roll the window schedule: solve on each in-sample range, then hold the
// weights buy-and-hold across the out-of-sample range (asset log-returns
// converted to simple returns; weights drift with realized growth and reset
// at each rebalance). A failed window aborts the run with the window named.
BacktestResult run_backtest(const ReturnPanel& panel, const StrategySpec& spec,
                            const BacktestConfig& cfg);

enum class ErrorKind { None, Config, Data, Solver, Other };

struct SuiteEntry {
    StrategySpec spec;
    std::optional<BacktestResult> result;
    std::string error;  // empty on success
    ErrorKind error_kind = ErrorKind::None;
};

// One run_backtest per spec over the identical window schedule; specs run
// concurrently and fail independently, output order matching input order.
std::vector<SuiteEntry> run_suite(const ReturnPanel& panel,
                                  const std::vector<StrategySpec>& specs,
                                  const BacktestConfig& cfg);

}  // namespace netfolio
