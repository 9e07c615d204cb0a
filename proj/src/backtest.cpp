#include "netfolio/backtest.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace netfolio {

namespace {

StrategySpec make_spec(const std::string& label, Strategy strategy, EstimatorKind estimator,
                       RiskKind risk, std::optional<double> lambda = std::nullopt) {
    StrategySpec spec;
    spec.label = label;
    spec.strategy = strategy;
    spec.estimator = estimator;
    spec.risk_model = risk;
    spec.lambda = lambda;
    return spec;
}

std::string window_tag(const ReturnPanel& panel, const WindowPair& w, size_t index) {
    return "window " + std::to_string(index + 1) + " [" +
           panel.dates()[static_cast<size_t>(w.in_begin)].to_string() + " .. " +
           panel.dates()[static_cast<size_t>(w.out_end - 1)].to_string() + "]";
}

Allocation solve_window(const ReturnPanel& panel, const WindowPair& window,
                        const StrategySpec& spec, const BacktestConfig& cfg) {
    if (spec.strategy == Strategy::EW) return equal_weights(panel.assets());
    auto [mu, risk] = build_inputs(panel, window, spec, cfg.normalization);
    switch (spec.strategy) {
        case Strategy::GMV: return solve_gmv(risk, cfg.solver);
        case Strategy::MV: return solve_mv(risk, mu, *spec.lambda, cfg.solver);
        case Strategy::ERC: return solve_erc(risk, cfg.solver);
        case Strategy::MDP: return solve_mdp(risk, cfg.solver);
        case Strategy::EW: break;
    }
    throw ConfigError("unknown strategy");
}

}  // namespace

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::MV: return "MV";
        case Strategy::GMV: return "GMV";
        case Strategy::ERC: return "ERC";
        case Strategy::MDP: return "MDP";
        case Strategy::EW: return "EW";
    }
    return "unknown";
}

void validate_spec(const StrategySpec& spec) {
    if (spec.label.empty()) throw ConfigError("strategy spec needs a label");
    if (spec.strategy == Strategy::MV) {
        if (!spec.lambda)
            throw ConfigError(spec.label + ": MV needs a lambda trade-off");
        if (!(*spec.lambda >= 0.0 && *spec.lambda <= 1.0))
            throw ConfigError(spec.label + ": lambda must lie in [0, 1], got " +
                              std::to_string(*spec.lambda));
    } else if (spec.lambda) {
        throw ConfigError(spec.label + ": lambda is only meaningful for MV");
    }
    if (spec.estimator == EstimatorKind::ConstantCorrelation)
        throw ConfigError(spec.label +
                          ": the constant-correlation matrix is a shrinkage target, not a "
                          "stand-alone backtest estimator");
}

std::vector<StrategySpec> model_table(double lambda) {
    std::vector<StrategySpec> specs;
    const Strategy blocks[] = {Strategy::MV, Strategy::MDP, Strategy::ERC, Strategy::GMV};
    for (Strategy strategy : blocks) {
        const std::string name = strategy_name(strategy);
        const std::optional<double> l =
            strategy == Strategy::MV ? std::optional<double>(lambda) : std::nullopt;
        specs.push_back(make_spec("S-sample " + name, strategy, EstimatorKind::Sample,
                                  RiskKind::Standard, l));
        specs.push_back(make_spec("S-shrinkage " + name, strategy, EstimatorKind::Shrinkage,
                                  RiskKind::Standard, l));
        specs.push_back(make_spec("NB-sample " + name, strategy, EstimatorKind::Sample,
                                  RiskKind::Network, l));
        specs.push_back(make_spec("NB-shrinkage " + name, strategy, EstimatorKind::Shrinkage,
                                  RiskKind::Network, l));
    }
    specs.push_back(make_spec("EW", Strategy::EW, EstimatorKind::Sample, RiskKind::Standard));
    return specs;
}

std::pair<MeanEstimate, RiskModel> build_inputs(const ReturnPanel& panel,
                                                const WindowPair& window,
                                                const StrategySpec& spec,
                                                ClusteringNormalization normalization) {
    if (window.in_length() < 2) throw DataError("in-sample window has fewer than 2 rows");
    auto block = panel.returns().middleRows(window.in_begin, window.in_length());
    MeanEstimate mu = sample_mean(block);
    CovarianceEstimate cov = spec.estimator == EstimatorKind::Shrinkage
                                 ? shrinkage_covariance(block)
                                 : sample_covariance(block);
    for (Index i = 0; i < cov.sigma.rows(); ++i)
        if (!(cov.sigma(i, i) > 0.0))
            throw DataError("zero in-sample variance for " +
                            panel.tickers()[static_cast<size_t>(i)]);
    RiskModel risk = spec.risk_model == RiskKind::Network
                         ? network_risk_model(cov, normalization, panel.tickers())
                         : standard_risk_model(cov);
    return {std::move(mu), std::move(risk)};
}

BacktestResult run_backtest(const ReturnPanel& panel, const StrategySpec& spec,
                            const BacktestConfig& cfg) {
    validate_spec(spec);
    const std::vector<WindowPair> schedule =
        rolling_windows(panel, cfg.in_sample, cfg.out_sample, cfg.unit, cfg.allow_partial_tail);

    BacktestResult result;
    result.spec = spec;
    result.windows.reserve(schedule.size());

    Index total_days = 0;
    for (const WindowPair& w : schedule) total_days += w.out_length();
    result.dates.reserve(static_cast<size_t>(total_days));
    result.oos_returns.resize(total_days);

    Index day = 0;
    for (size_t wi = 0; wi < schedule.size(); ++wi) {
        const WindowPair& w = schedule[wi];
        Allocation alloc;
        try {
            alloc = solve_window(panel, w, spec, cfg);
        } catch (const ConfigError& e) {
            throw ConfigError(window_tag(panel, w, wi) + ": " + e.what());
        } catch (const DataError& e) {
            throw DataError(window_tag(panel, w, wi) + ": " + e.what());
        } catch (const SolverError& e) {
            throw SolverError(window_tag(panel, w, wi) + ": " + e.what());
        }

        Vector weights = alloc.weights;  // drifts within the window
        for (Index t = w.out_begin; t < w.out_end; ++t) {
            Vector growth(panel.assets());
            for (Index i = 0; i < panel.assets(); ++i)
                growth(i) = std::expm1(panel.returns()(t, i));
            const double rp = weights.dot(growth);
            result.oos_returns(day++) = rp;
            result.dates.push_back(panel.dates()[static_cast<size_t>(t)]);
            if (!cfg.rebalance_daily)
                weights = (weights.array() * (growth.array() + 1.0) / (1.0 + rp)).matrix();
            else
                weights = alloc.weights;
        }
        result.windows.push_back(WindowAllocation{w, std::move(alloc)});
    }

    result.cumulative = cumulative_performance(result.oos_returns);
    return result;
}

std::vector<SuiteEntry> run_suite(const ReturnPanel& panel,
                                  const std::vector<StrategySpec>& specs,
                                  const BacktestConfig& cfg) {
    if (specs.empty()) throw ConfigError("strategy suite is empty");
    std::vector<SuiteEntry> entries(specs.size());
    for (size_t i = 0; i < specs.size(); ++i) entries[i].spec = specs[i];

    unsigned hw = std::thread::hardware_concurrency();
    size_t workers = cfg.threads > 0 ? static_cast<size_t>(cfg.threads)
                                     : static_cast<size_t>(hw > 0 ? hw : 1);
    workers = std::min(workers, specs.size());

    std::atomic<size_t> next{0};
    auto work = [&]() {
        for (size_t i = next.fetch_add(1); i < specs.size(); i = next.fetch_add(1)) {
            try {
                entries[i].result = run_backtest(panel, specs[i], cfg);
            } catch (const ConfigError& e) {
                entries[i].error = e.what();
                entries[i].error_kind = ErrorKind::Config;
            } catch (const SolverError& e) {
                entries[i].error = e.what();
                entries[i].error_kind = ErrorKind::Solver;
            } catch (const DataError& e) {
                entries[i].error = e.what();
                entries[i].error_kind = ErrorKind::Data;
            } catch (const std::exception& e) {
                entries[i].error = e.what();
                entries[i].error_kind = ErrorKind::Other;
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (size_t i = 0; i < workers; ++i) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    return entries;
}

}  // namespace netfolio
