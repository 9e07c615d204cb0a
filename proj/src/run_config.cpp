#include "netfolio/run_config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace netfolio {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& field, const std::string& detail) {
    throw ConfigError("config field '" + field + "': " + detail);
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        bad_field(key, "wrong type");
    }
}

CsvFormat parse_format(const std::string& s) {
    if (s == "wide") return CsvFormat::Wide;
    if (s == "long") return CsvFormat::Long;
    bad_field("data.format", "expected \"wide\" or \"long\", got \"" + s + "\"");
}

WindowUnit parse_unit(const std::string& s) {
    if (s == "trading_days") return WindowUnit::TradingDays;
    if (s == "calendar_months") return WindowUnit::CalendarMonths;
    bad_field("window.unit", "expected \"trading_days\" or \"calendar_months\", got \"" + s + "\"");
}

Strategy parse_strategy(const std::string& s) {
    static const std::unordered_map<std::string, Strategy> map = {
        {"MV", Strategy::MV},   {"GMV", Strategy::GMV}, {"ERC", Strategy::ERC},
        {"MDP", Strategy::MDP}, {"EW", Strategy::EW},
    };
    auto it = map.find(s);
    if (it == map.end()) bad_field("specs.strategy", "unknown strategy \"" + s + "\"");
    return it->second;
}

EstimatorKind parse_estimator(const std::string& s) {
    if (s == "sample") return EstimatorKind::Sample;
    if (s == "shrinkage") return EstimatorKind::Shrinkage;
    bad_field("specs.estimator", "expected \"sample\" or \"shrinkage\", got \"" + s + "\"");
}

RiskKind parse_risk(const std::string& s) {
    if (s == "standard") return RiskKind::Standard;
    if (s == "network") return RiskKind::Network;
    bad_field("specs.risk_model", "expected \"standard\" or \"network\", got \"" + s + "\"");
}

StrategySpec parse_spec(const json& j) {
    if (!j.is_object()) throw ConfigError("each spec must be an object");
    StrategySpec spec;
    spec.strategy = parse_strategy(get_or<std::string>(j, "strategy", ""));
    spec.estimator = parse_estimator(get_or<std::string>(j, "estimator", "sample"));
    spec.risk_model = parse_risk(get_or<std::string>(j, "risk_model", "standard"));
    if (j.contains("lambda")) spec.lambda = get_or<double>(j, "lambda", 0.0);
    spec.label = get_or<std::string>(j, "label", "");
    if (spec.label.empty()) {
        if (spec.strategy == Strategy::EW) {
            spec.label = "EW";
        } else {
            spec.label = std::string(spec.risk_model == RiskKind::Network ? "NB" : "S") + "-" +
                         (spec.estimator == EstimatorKind::Shrinkage ? "shrinkage" : "sample") +
                         " " + strategy_name(spec.strategy);
        }
    }
    return spec;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text, const std::string& origin) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw ConfigError(origin + ": top level must be a JSON object");

    RunConfig config;

    if (!j.contains("data") || !j.at("data").is_object())
        throw ConfigError(origin + ": missing required \"data\" object");
    const json& data = j.at("data");
    config.data.path = get_or<std::string>(data, "path", "");
    if (config.data.path.empty()) bad_field("data.path", "required");
    config.data.format = parse_format(get_or<std::string>(data, "format", "wide"));
    const std::string kind = get_or<std::string>(data, "kind", "prices");
    if (kind == "returns")
        config.data.is_returns = true;
    else if (kind != "prices")
        bad_field("data.kind", "expected \"prices\" or \"returns\", got \"" + kind + "\"");

    config.tickers = get_or<std::vector<std::string>>(j, "tickers", {});

    if (!j.contains("window") || !j.at("window").is_object())
        throw ConfigError(origin + ": missing required \"window\" object");
    const json& window = j.at("window");
    config.backtest.in_sample = get_or<int>(window, "in_sample", 0);
    config.backtest.out_sample = get_or<int>(window, "out_sample", 0);
    config.backtest.unit = parse_unit(get_or<std::string>(window, "unit", "trading_days"));
    config.backtest.allow_partial_tail = get_or<bool>(window, "allow_partial_tail", false);

    if (j.contains("solver")) {
        const json& solver = j.at("solver");
        config.backtest.solver.kkt_tolerance =
            get_or<double>(solver, "kkt_tolerance", config.backtest.solver.kkt_tolerance);
        config.backtest.solver.max_iterations =
            get_or<int>(solver, "max_iterations", config.backtest.solver.max_iterations);
        config.backtest.solver.erc_tolerance =
            get_or<double>(solver, "erc_tolerance", config.backtest.solver.erc_tolerance);
    }

    if (j.contains("metrics")) {
        const json& metrics = j.at("metrics");
        config.metrics.risk_free = get_or<double>(metrics, "risk_free", 0.0);
        config.metrics.omega_threshold = get_or<double>(metrics, "omega_threshold", 0.0);
        config.metrics.ir_reference = get_or<std::string>(metrics, "ir_reference", "EW");
    }

    if (j.contains("network")) {
        const std::string norm = get_or<std::string>(j.at("network"), "normalization", "averaged");
        if (norm == "averaged")
            config.backtest.normalization = ClusteringNormalization::Averaged;
        else if (norm == "integral")
            config.backtest.normalization = ClusteringNormalization::Integral;
        else
            bad_field("network.normalization", "expected \"averaged\" or \"integral\"");
    }

    if (j.contains("backtest"))
        config.backtest.rebalance_daily = get_or<bool>(j.at("backtest"), "rebalance_daily", false);

    if (j.contains("specs")) {
        const json& specs = j.at("specs");
        if (specs.is_string()) {
            if (specs.get<std::string>() != "model_table")
                bad_field("specs", "the only string form is \"model_table\"");
            config.specs = model_table(get_or<double>(j, "lambda", 0.5));
        } else if (specs.is_array()) {
            for (const json& item : specs) config.specs.push_back(parse_spec(item));
        } else {
            bad_field("specs", "expected \"model_table\" or an array of spec objects");
        }
    } else {
        config.specs = model_table(get_or<double>(j, "lambda", 0.5));
    }

    config.output_dir = get_or<std::string>(j, "output_dir", "out");
    config.backtest.threads = get_or<int>(j, "threads", 0);

    validate_run_config(config);
    return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file.is_open()) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream os;
    os << file.rdbuf();
    return parse_run_config(os.str(), path.string());
}

void validate_run_config(const RunConfig& config) {
    if (config.backtest.in_sample < 1 || config.backtest.out_sample < 1)
        throw ConfigError("window.in_sample and window.out_sample must be positive");
    if (config.backtest.threads < 0) throw ConfigError("threads must be >= 0");
    if (config.backtest.solver.kkt_tolerance <= 0.0 ||
        config.backtest.solver.erc_tolerance <= 0.0)
        throw ConfigError("solver tolerances must be positive");
    if (config.backtest.solver.max_iterations < 1)
        throw ConfigError("solver.max_iterations must be positive");
    if (config.specs.empty()) throw ConfigError("at least one spec is required");

    std::unordered_set<std::string> labels;
    for (const StrategySpec& spec : config.specs) {
        validate_spec(spec);
        if (!labels.insert(spec.label).second)
            throw ConfigError("duplicate spec label \"" + spec.label + "\"");
    }
    if (!labels.count(config.metrics.ir_reference) && config.metrics.ir_reference != "EW")
        throw ConfigError("metrics.ir_reference \"" + config.metrics.ir_reference +
                          "\" names no spec in the list (and is not \"EW\")");

    std::unordered_set<std::string> seen;
    for (const std::string& t : config.tickers)
        if (!seen.insert(t).second)
            throw ConfigError("duplicate ticker \"" + t + "\" in the filter");
}

ReturnPanel filter_tickers(const ReturnPanel& panel, const std::vector<std::string>& keep) {
    if (keep.empty())
        return panel;
    std::unordered_map<std::string, Index> index;
    for (Index i = 0; i < panel.assets(); ++i) index.emplace(panel.tickers()[static_cast<size_t>(i)], i);
    Matrix sub(panel.rows(), static_cast<Index>(keep.size()));
    for (size_t k = 0; k < keep.size(); ++k) {
        auto it = index.find(keep[k]);
        if (it == index.end())
            throw ConfigError("the ticker filter names \"" + keep[k] + "\", absent from the data");
        sub.col(static_cast<Index>(k)) = panel.returns().col(it->second);
    }
    return ReturnPanel(panel.dates(), keep, std::move(sub));
}

ReturnPanel load_panel(const RunConfig& config, const std::filesystem::path& workdir) {
    std::filesystem::path data_path(config.data.path);
    if (data_path.is_relative()) data_path = workdir / data_path;
    ReturnPanel panel =
        config.data.is_returns
            ? load_returns_csv(data_path.string(), config.data.format)
            : log_returns(load_prices_csv(data_path.string(), config.data.format));
    return filter_tickers(panel, config.tickers);
}

}  // namespace netfolio
