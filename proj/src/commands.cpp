#include "netfolio/commands.hpp"

#include "netfolio/version.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace netfolio {

namespace {

using nlohmann::ordered_json;

std::filesystem::path resolve(const std::filesystem::path& p,
                              const std::filesystem::path& workdir) {
    return p.is_relative() ? workdir / p : p;
}

std::string window_id(size_t index) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "window_%03zu", index + 1);
    return buf;
}

ordered_json spec_to_json(const StrategySpec& spec) {
    ordered_json j;
    j["label"] = spec.label;
    j["strategy"] = strategy_name(spec.strategy);
    if (spec.strategy != Strategy::EW) {
        j["estimator"] = spec.estimator == EstimatorKind::Shrinkage ? "shrinkage" : "sample";
        j["risk_model"] = spec.risk_model == RiskKind::Network ? "network" : "standard";
    }
    if (spec.lambda) j["lambda"] = *spec.lambda;
    return j;
}

// Accumulates the provenance record each command leaves next to its
// artifacts: the effective config (with hash), input hashes, output hashes.
class ManifestBuilder {
public:
    ManifestBuilder(const std::string& command, const RunConfig& config) : command_(command) {
        j_["command"] = command;
        j_["library"] = std::string("netfolio ") + kVersion;
        const std::string cfg = run_config_to_json(config);
        j_["config"] = ordered_json::parse(cfg);
        j_["config_hash"] = hash_string(fnv1a(cfg));
    }

    void add_input(const std::filesystem::path& path) {
        inputs_.push_back({{"path", path.string()}, {"hash", hash_string(fnv1a_file(path))}});
    }

    void add_output(const std::filesystem::path& dir, const std::string& name) {
        outputs_[name] = hash_string(fnv1a_file(dir / name));
    }

    void set_specs(ordered_json specs) { specs_ = std::move(specs); }

    void write(const std::filesystem::path& dir) {
        j_["inputs"] = inputs_;
        ordered_json outs = ordered_json::object();
        for (const auto& [name, hash] : outputs_) outs[name] = hash;
        j_["outputs"] = outs;
        if (!specs_.is_null()) j_["specs"] = specs_;
        write_text_file(dir / ("manifest_" + command_ + ".json"), j_.dump(2) + "\n");
    }

private:
    std::string command_;
    ordered_json j_;
    ordered_json inputs_ = ordered_json::array();
    std::map<std::string, std::string> outputs_;  // sorted for determinism
    ordered_json specs_;
};

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::None: return 0;
        case ErrorKind::Config: return 2;
        case ErrorKind::Data: return 3;
        case ErrorKind::Solver: return 4;
        case ErrorKind::Other: return 1;
    }
    return 1;
}

// Summary row with a fault-tolerant IR cell: an undefined IR (zero tracking
// error against the reference) leaves the cell empty instead of failing the
// whole table.
PerformanceReport build_row(const Vector& series, const Vector* reference,
                            const MetricsConfig& metrics) {
    PerformanceReport report;
    report.stats = moments(series);
    report.sharpe = sharpe_ratio(series, metrics.risk_free);
    report.omega = omega_ratio(series, metrics.omega_threshold);
    report.info_reference = metrics.ir_reference;
    if (reference != nullptr) {
        try {
            report.info_ratio = information_ratio(series, *reference);
        } catch (const DataError&) {
            report.info_ratio = std::nullopt;
        }
    }
    return report;
}

std::vector<std::string> estimator_tags(const RunConfig& config) {
    std::set<std::string> tags;
    for (const StrategySpec& spec : config.specs) {
        if (spec.strategy == Strategy::EW) continue;
        tags.insert(spec.estimator == EstimatorKind::Shrinkage ? "shrinkage" : "sample");
    }
    if (tags.empty()) tags.insert("sample");
    return {tags.begin(), tags.end()};
}

Vector read_mean_csv(const std::filesystem::path& path,
                     const std::vector<std::string>& tickers) {
    std::ifstream file(path);
    if (!file.is_open()) throw DataError("cannot open mean file: " + path.string());
    std::string line;
    if (!std::getline(file, line)) throw DataError(path.string() + ": empty mean file");
    std::map<std::string, double> values;
    int line_no = 1;
    while (std::getline(file, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": expected ticker,mean");
        std::string ticker = line.substr(0, comma);
        if (!ticker.empty() && ticker.back() == '\r') ticker.pop_back();
        try {
            values[ticker] = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad mean value");
        }
    }
    Vector mu(static_cast<Index>(tickers.size()));
    for (size_t i = 0; i < tickers.size(); ++i) {
        auto it = values.find(tickers[i]);
        if (it == values.end())
            throw DataError(path.string() + ": no mean for ticker " + tickers[i]);
        mu(static_cast<Index>(i)) = it->second;
    }
    return mu;
}

}  // namespace

std::string run_config_to_json(const RunConfig& config) {
    ordered_json j;
    j["data"]["path"] = config.data.path;
    j["data"]["format"] = config.data.format == CsvFormat::Wide ? "wide" : "long";
    j["data"]["kind"] = config.data.is_returns ? "returns" : "prices";
    if (!config.tickers.empty()) j["tickers"] = config.tickers;
    j["window"]["in_sample"] = config.backtest.in_sample;
    j["window"]["out_sample"] = config.backtest.out_sample;
    j["window"]["unit"] =
        config.backtest.unit == WindowUnit::TradingDays ? "trading_days" : "calendar_months";
    j["window"]["allow_partial_tail"] = config.backtest.allow_partial_tail;
    j["specs"] = ordered_json::array();
    for (const StrategySpec& spec : config.specs) j["specs"].push_back(spec_to_json(spec));
    j["solver"]["kkt_tolerance"] = config.backtest.solver.kkt_tolerance;
    j["solver"]["max_iterations"] = config.backtest.solver.max_iterations;
    j["solver"]["erc_tolerance"] = config.backtest.solver.erc_tolerance;
    j["metrics"]["risk_free"] = config.metrics.risk_free;
    j["metrics"]["omega_threshold"] = config.metrics.omega_threshold;
    j["metrics"]["ir_reference"] = config.metrics.ir_reference;
    j["network"]["normalization"] =
        config.backtest.normalization == ClusteringNormalization::Averaged ? "averaged"
                                                                           : "integral";
    j["backtest"]["rebalance_daily"] = config.backtest.rebalance_daily;
    j["output_dir"] = config.output_dir;
    j["threads"] = config.backtest.threads;
    return j.dump(2) + "\n";
}

int cmd_estimate(const RunConfig& config, const std::filesystem::path& workdir) {
    const ReturnPanel panel = load_panel(config, workdir);
    const std::vector<WindowPair> windows =
        rolling_windows(panel, config.backtest.in_sample, config.backtest.out_sample,
                        config.backtest.unit, config.backtest.allow_partial_tail);
    const std::filesystem::path out_dir = resolve(config.output_dir, workdir) / "estimate";
    std::filesystem::create_directories(out_dir);

    ManifestBuilder manifest("estimate", config);
    manifest.add_input(resolve(config.data.path, workdir));

    std::ostringstream kappa_csv;
    kappa_csv << "window,in_start,in_end,kappa\n";
    for (size_t wi = 0; wi < windows.size(); ++wi) {
        const WindowPair& w = windows[wi];
        auto block = panel.returns().middleRows(w.in_begin, w.in_length());
        const CovarianceEstimate sample = sample_covariance(block);
        const CovarianceEstimate target = constant_correlation_covariance(sample);
        const double kappa = shrinkage_intensity(block, sample, target);
        const CovarianceEstimate shrunk = shrink_covariance(sample, target, kappa);

        const std::string id = window_id(wi);
        write_matrix_csv(out_dir / (id + "_sample.csv"), sample.sigma, panel.tickers());
        write_matrix_csv(out_dir / (id + "_constant_correlation.csv"), target.sigma,
                         panel.tickers());
        write_matrix_csv(out_dir / (id + "_shrinkage.csv"), shrunk.sigma, panel.tickers());
        manifest.add_output(out_dir, id + "_sample.csv");
        manifest.add_output(out_dir, id + "_constant_correlation.csv");
        manifest.add_output(out_dir, id + "_shrinkage.csv");

        kappa_csv << (wi + 1) << ","
                  << panel.dates()[static_cast<size_t>(w.in_begin)].to_string() << ","
                  << panel.dates()[static_cast<size_t>(w.in_end - 1)].to_string() << ","
                  << format_double(kappa) << "\n";
    }
    write_text_file(out_dir / "kappa.csv", kappa_csv.str());
    manifest.add_output(out_dir, "kappa.csv");
    manifest.write(out_dir);
    return 0;
}

int cmd_network(const RunConfig& config, const std::filesystem::path& workdir) {
    const ReturnPanel panel = load_panel(config, workdir);
    const std::vector<WindowPair> windows =
        rolling_windows(panel, config.backtest.in_sample, config.backtest.out_sample,
                        config.backtest.unit, config.backtest.allow_partial_tail);
    const std::filesystem::path out_dir = resolve(config.output_dir, workdir) / "network";
    std::filesystem::create_directories(out_dir);

    ManifestBuilder manifest("network", config);
    manifest.add_input(resolve(config.data.path, workdir));

    for (size_t wi = 0; wi < windows.size(); ++wi) {
        const WindowPair& w = windows[wi];
        auto block = panel.returns().middleRows(w.in_begin, w.in_length());
        for (const std::string& tag : estimator_tags(config)) {
            const CovarianceEstimate cov =
                tag == "shrinkage" ? shrinkage_covariance(block) : sample_covariance(block);
            const CorrelationNetwork net = correlation_from_covariance(cov, panel.tickers());
            const ClusteringVector clustering =
                integrated_clustering(net, config.backtest.normalization);
            const Matrix cmat = interconnectedness_matrix(clustering);
            const RiskModel h = risk_matrix_h(cmat, cov.vols);

            const std::string base = window_id(wi) + "_" + tag;
            write_matrix_csv(out_dir / (base + "_W.csv"), net.weights, panel.tickers());
            write_vector_csv(out_dir / (base + "_clustering.csv"), clustering.c,
                             panel.tickers(), "clustering");
            write_matrix_csv(out_dir / (base + "_C.csv"), cmat, panel.tickers());
            write_matrix_csv(out_dir / (base + "_H.csv"), h.matrix, panel.tickers());
            write_edge_list_csv(out_dir / (base + "_edges.csv"), net);
            for (const char* suffix : {"_W.csv", "_clustering.csv", "_C.csv", "_H.csv",
                                       "_edges.csv"})
                manifest.add_output(out_dir, base + suffix);
        }
    }
    manifest.write(out_dir);
    return 0;
}

int cmd_solve(const SolveOptions& options, std::ostream& out) {
    auto [tickers, matrix] = read_matrix_csv(options.matrix_path);
    RiskModel risk;
    risk.matrix = matrix;
    risk.vols = matrix.diagonal().cwiseMax(0.0).array().sqrt();
    risk.kind = RiskKind::Standard;

    std::string strategy = options.strategy;
    std::transform(strategy.begin(), strategy.end(), strategy.begin(),
                   [](unsigned char c) { return std::toupper(c); });

    Allocation alloc;
    if (strategy == "GMV") {
        alloc = solve_gmv(risk, options.solver);
    } else if (strategy == "ERC") {
        alloc = solve_erc(risk, options.solver);
    } else if (strategy == "MDP") {
        alloc = solve_mdp(risk, options.solver);
    } else if (strategy == "EW") {
        alloc = equal_weights(matrix.rows());
    } else if (strategy == "MV") {
        if (!options.lambda) throw ConfigError("solve: MV needs --lambda");
        if (options.mean_path.empty()) throw ConfigError("solve: MV needs --mean");
        MeanEstimate mu{read_mean_csv(options.mean_path, tickers)};
        alloc = solve_mv(risk, mu, *options.lambda, options.solver);
    } else {
        throw ConfigError("solve: unknown strategy \"" + options.strategy + "\"");
    }

    std::ostringstream csv;
    csv << "ticker,weight\n";
    for (Index i = 0; i < alloc.weights.size(); ++i)
        csv << tickers[static_cast<size_t>(i)] << "," << format_double(alloc.weights(i)) << "\n";
    out << csv.str();
    if (!options.output.empty()) write_text_file(options.output, csv.str());
    return 0;
}

int cmd_backtest(const RunConfig& config, const std::filesystem::path& workdir) {
    const ReturnPanel panel = load_panel(config, workdir);
    const std::filesystem::path out_dir = resolve(config.output_dir, workdir);
    std::filesystem::create_directories(out_dir);

    // The IR reference must be available as a series; when it names no listed
    // spec (validation then guarantees it is "EW"), run EW additionally as a
    // hidden reference: artifacts are written, but no summary row appears.
    std::vector<StrategySpec> run_specs = config.specs;
    const bool hidden_reference =
        std::none_of(config.specs.begin(), config.specs.end(), [&](const StrategySpec& s) {
            return s.label == config.metrics.ir_reference;
        });
    if (hidden_reference) {
        StrategySpec ew;
        ew.label = "EW";
        ew.strategy = Strategy::EW;
        run_specs.push_back(ew);
    }

    const std::vector<SuiteEntry> entries = run_suite(panel, run_specs, config.backtest);

    ManifestBuilder manifest("backtest", config);
    manifest.add_input(resolve(config.data.path, workdir));

    for (const SuiteEntry& entry : entries) {
        if (!entry.result) continue;
        const std::string frag = sanitize_label(entry.spec.label);
        write_weights_csv(out_dir / ("weights_" + frag + ".csv"), panel, *entry.result);
        write_series_csv(out_dir / ("oos_returns_" + frag + ".csv"), entry.result->dates,
                         entry.result->oos_returns, "return");
        write_series_csv(out_dir / ("cumulative_" + frag + ".csv"), entry.result->dates,
                         entry.result->cumulative, "wealth");
        manifest.add_output(out_dir, "weights_" + frag + ".csv");
        manifest.add_output(out_dir, "oos_returns_" + frag + ".csv");
        manifest.add_output(out_dir, "cumulative_" + frag + ".csv");
    }

    // Summary statistics are computed from the series exactly as serialized
    // (parse of the 10-digit scientific rendering), so the table is a pure
    // function of the stored artifacts and `report` rebuilds it byte for byte.
    auto round_trip = [](const Vector& v) {
        Vector out(v.size());
        for (Index i = 0; i < v.size(); ++i)
            out(i) = std::strtod(format_double(v(i)).c_str(), nullptr);
        return out;
    };

    const SuiteEntry* reference = nullptr;
    for (const SuiteEntry& entry : entries)
        if (entry.result && entry.spec.label == config.metrics.ir_reference) reference = &entry;
    Vector reference_stored;
    if (reference != nullptr) reference_stored = round_trip(reference->result->oos_returns);

    std::vector<std::pair<std::string, PerformanceReport>> rows;
    for (size_t i = 0; i < config.specs.size(); ++i) {
        const SuiteEntry& entry = entries[i];
        if (!entry.result) continue;
        const Vector* ref = nullptr;
        if (entry.spec.label != config.metrics.ir_reference && reference != nullptr)
            ref = &reference_stored;
        rows.emplace_back(entry.spec.label,
                          build_row(round_trip(entry.result->oos_returns), ref, config.metrics));
    }
    write_text_file(out_dir / "summary.csv", summary_table_csv(rows, config.metrics.ir_reference));
    write_text_file(out_dir / "summary.json",
                    summary_table_json(rows, config.metrics.ir_reference));
    manifest.add_output(out_dir, "summary.csv");
    manifest.add_output(out_dir, "summary.json");

    int exit_code = 0;
    ordered_json statuses = ordered_json::array();
    for (size_t i = 0; i < entries.size(); ++i) {
        const SuiteEntry& entry = entries[i];
        ordered_json status;
        status["label"] = entry.spec.label;
        if (entry.result) {
            status["status"] = "ok";
        } else {
            status["status"] = "error";
            status["error"] = entry.error;
            status["exit_code"] = exit_code_for(entry.error_kind);
            if (i < config.specs.size() && exit_code == 0)
                exit_code = exit_code_for(entry.error_kind);
        }
        statuses.push_back(std::move(status));
    }
    manifest.set_specs(std::move(statuses));
    manifest.write(out_dir);
    return exit_code;
}

int cmd_report(const RunConfig& config, const std::filesystem::path& workdir,
               std::ostream& out) {
    const std::filesystem::path out_dir = resolve(config.output_dir, workdir);
    ManifestBuilder manifest("report", config);

    std::map<std::string, Vector> series;
    auto load_series = [&](const std::string& label) -> const Vector& {
        auto it = series.find(label);
        if (it == series.end()) {
            const std::filesystem::path path =
                out_dir / ("oos_returns_" + sanitize_label(label) + ".csv");
            it = series.emplace(label, read_series_csv(path).second).first;
            manifest.add_input(path);
        }
        return it->second;
    };

    const Vector* reference = nullptr;
    try {
        reference = &load_series(config.metrics.ir_reference);
    } catch (const DataError&) {
        reference = nullptr;  // reference series missing: IR cells stay empty
    }

    std::vector<std::pair<std::string, PerformanceReport>> rows;
    for (const StrategySpec& spec : config.specs) {
        const Vector& s = load_series(spec.label);
        const Vector* ref =
            spec.label == config.metrics.ir_reference ? nullptr : reference;
        rows.emplace_back(spec.label, build_row(s, ref, config.metrics));
    }

    const std::string csv = summary_table_csv(rows, config.metrics.ir_reference);
    write_text_file(out_dir / "summary.csv", csv);
    write_text_file(out_dir / "summary.json",
                    summary_table_json(rows, config.metrics.ir_reference));
    manifest.add_output(out_dir, "summary.csv");
    manifest.add_output(out_dir, "summary.json");
    manifest.write(out_dir);
    out << csv;
    return 0;
}

}  // namespace netfolio
