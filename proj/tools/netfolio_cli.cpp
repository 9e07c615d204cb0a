#include <CLI11.hpp>

#include "netfolio/commands.hpp"
#include "netfolio/version.hpp"

#include <filesystem>
#include <iostream>

namespace {

struct ConfigCommandOptions {
    std::string config;
    std::string output_dir;
    int in_sample = -1;
    int out_sample = -1;
    std::string unit;
    std::string ir_reference;
};

CLI::App* add_config_command(CLI::App& app, const std::string& name, const std::string& desc,
                             ConfigCommandOptions& opts) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    cmd->add_option("-c,--config", opts.config, "Run configuration (JSON)")->required();
    cmd->add_option("--output-dir", opts.output_dir, "Override config output_dir");
    cmd->add_option("--in-sample", opts.in_sample, "Override window.in_sample");
    cmd->add_option("--out-sample", opts.out_sample, "Override window.out_sample");
    cmd->add_option("--unit", opts.unit, "Override window.unit (trading_days|calendar_months)");
    cmd->add_option("--ir-reference", opts.ir_reference, "Override metrics.ir_reference");
    return cmd;
}

netfolio::RunConfig load_with_overrides(const ConfigCommandOptions& opts,
                                        const std::filesystem::path& workdir, int threads) {
    std::filesystem::path config_path(opts.config);
    if (config_path.is_relative()) config_path = workdir / config_path;
    netfolio::RunConfig config = netfolio::load_run_config(config_path);
    if (!opts.output_dir.empty()) config.output_dir = opts.output_dir;
    if (opts.in_sample > 0) config.backtest.in_sample = opts.in_sample;
    if (opts.out_sample > 0) config.backtest.out_sample = opts.out_sample;
    if (!opts.unit.empty()) {
        if (opts.unit == "trading_days")
            config.backtest.unit = netfolio::WindowUnit::TradingDays;
        else if (opts.unit == "calendar_months")
            config.backtest.unit = netfolio::WindowUnit::CalendarMonths;
        else
            throw netfolio::ConfigError("--unit expects trading_days or calendar_months, got " +
                                        opts.unit);
    }
    if (!opts.ir_reference.empty()) config.metrics.ir_reference = opts.ir_reference;
    if (threads >= 0) config.backtest.threads = threads;
    netfolio::validate_run_config(config);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Network-based portfolio selection: estimation, correlation networks, "
                 "simplex-constrained allocation and rolling out-of-sample backtests"};
    app.set_version_flag("--version", std::string("netfolio ") + netfolio::kVersion);
    app.require_subcommand(1);

    std::string workdir = ".";
    int threads = -1;
    app.add_option("--workdir", workdir, "Base directory for relative paths")
        ->capture_default_str();
    app.add_option("--threads", threads, "Cap suite parallelism (0 = hardware concurrency)");

    ConfigCommandOptions estimate_opts, network_opts, backtest_opts, report_opts;
    CLI::App* estimate = add_config_command(
        app, "estimate", "Write per-window covariance estimates and shrinkage intensities",
        estimate_opts);
    CLI::App* network = add_config_command(
        app, "network",
        "Write per-window correlation networks, clustering vectors and risk matrices",
        network_opts);
    CLI::App* backtest = add_config_command(
        app, "backtest", "Run the rolling out-of-sample suite and write all artifacts",
        backtest_opts);
    CLI::App* report = add_config_command(
        app, "report", "Rebuild the summary statistics table from stored return series",
        report_opts);

    netfolio::SolveOptions solve_opts;
    std::string matrix_path, mean_path, output_path;
    double lambda = -1.0;
    CLI::App* solve =
        app.add_subcommand("solve", "Solve one allocation problem on a matrix from CSV");
    solve->add_option("-m,--matrix", matrix_path, "Square risk matrix CSV")->required();
    solve->add_option("-s,--strategy", solve_opts.strategy, "MV|GMV|ERC|MDP|EW")
        ->capture_default_str();
    solve->add_option("--lambda", lambda, "MV trade-off in [0,1]");
    solve->add_option("--mean", mean_path, "ticker,mean CSV (required for MV)");
    solve->add_option("-o,--output", output_path, "Also write the weights CSV here");
    solve->add_option("--kkt-tolerance", solve_opts.solver.kkt_tolerance)
        ->capture_default_str();
    solve->add_option("--max-iterations", solve_opts.solver.max_iterations)
        ->capture_default_str();
    solve->add_option("--erc-tolerance", solve_opts.solver.erc_tolerance)
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad usage is a configuration error
    }

    const std::filesystem::path base(workdir);
    try {
        if (estimate->parsed())
            return netfolio::cmd_estimate(load_with_overrides(estimate_opts, base, threads),
                                          base);
        if (network->parsed())
            return netfolio::cmd_network(load_with_overrides(network_opts, base, threads), base);
        if (backtest->parsed())
            return netfolio::cmd_backtest(load_with_overrides(backtest_opts, base, threads),
                                          base);
        if (report->parsed())
            return netfolio::cmd_report(load_with_overrides(report_opts, base, threads), base,
                                        std::cout);
        if (solve->parsed()) {
            solve_opts.matrix_path = matrix_path;
            if (solve_opts.matrix_path.is_relative())
                solve_opts.matrix_path = base / solve_opts.matrix_path;
            if (!mean_path.empty()) {
                solve_opts.mean_path = mean_path;
                if (solve_opts.mean_path.is_relative())
                    solve_opts.mean_path = base / solve_opts.mean_path;
            }
            if (!output_path.empty()) {
                solve_opts.output = output_path;
                if (solve_opts.output.is_relative()) solve_opts.output = base / solve_opts.output;
            }
            if (lambda >= 0.0) solve_opts.lambda = lambda;
            return netfolio::cmd_solve(solve_opts, std::cout);
        }
    } catch (const netfolio::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const netfolio::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const netfolio::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;  // no subcommand matched (require_subcommand should prevent this)
}
