#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <netfolio/commands.hpp>
#include <nlohmann/json.hpp>

#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

using namespace netfolio;
using testsupport::TempDir;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.is_open());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const TempDir& dir, std::string* output = nullptr) {
    static int counter = 0;
    const auto capture = dir.path() / ("cli_out_" + std::to_string(counter++) + ".txt");
    const std::string cmd =
        std::string(NETFOLIO_CLI_PATH) + " " + args + " > " + capture.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    if (output) *output = slurp(capture);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const char* kMinimalConfig = R"({
  "data": {"path": "returns.csv", "format": "wide", "kind": "returns"},
  "window": {"in_sample": 10, "out_sample": 5}
})";

std::string small_suite_config(const std::string& extra_specs = "") {
    return std::string(R"({
  "data": {"path": "returns.csv", "format": "wide", "kind": "returns"},
  "window": {"in_sample": 10, "out_sample": 5},
  "specs": [
    {"strategy": "GMV", "estimator": "sample", "risk_model": "standard"},
    {"strategy": "GMV", "estimator": "sample", "risk_model": "network"})") +
           extra_specs + R"(,
    {"strategy": "EW", "label": "EW"}
  ]
})";
}

void write_panel(const TempDir& dir, std::uint64_t seed = 1234, int rows = 30, int cols = 3) {
    dir.write("returns.csv",
              testsupport::panel_to_returns_csv(testsupport::random_panel(seed, rows, cols)));
}

}  // namespace

TEST_CASE("minimal config takes the documented defaults") {
    const RunConfig cfg = parse_run_config(kMinimalConfig, "test");
    CHECK(cfg.data.path == "returns.csv");
    CHECK(cfg.data.is_returns);
    CHECK(cfg.data.format == CsvFormat::Wide);
    CHECK(cfg.backtest.in_sample == 10);
    CHECK(cfg.backtest.out_sample == 5);
    CHECK(cfg.backtest.unit == WindowUnit::TradingDays);
    CHECK_FALSE(cfg.backtest.rebalance_daily);
    CHECK(cfg.output_dir == "out");
    CHECK(cfg.metrics.ir_reference == "EW");
    CHECK(cfg.metrics.risk_free == 0.0);

    // Absent specs expand to the full model table with lambda 0.5.
    REQUIRE(cfg.specs.size() == 17);
    CHECK(cfg.specs[0].label == "S-sample MV");
    CHECK(*cfg.specs[0].lambda == 0.5);
    CHECK(cfg.specs[16].label == "EW");
    CHECK_NOTHROW(validate_run_config(cfg));
}

TEST_CASE("explicit model_table expansion honours the lambda field") {
    const RunConfig cfg = parse_run_config(R"({
      "data": {"path": "r.csv", "kind": "returns"},
      "window": {"in_sample": 20, "out_sample": 10},
      "specs": "model_table",
      "lambda": 0.25
    })", "test");
    REQUIRE(cfg.specs.size() == 17);
    CHECK(*cfg.specs[0].lambda == 0.25);
    CHECK(*cfg.specs[3].lambda == 0.25);
}

TEST_CASE("config parses every optional section") {
    const RunConfig cfg = parse_run_config(R"({
      "data": {"path": "p.csv", "format": "long", "kind": "prices"},
      "tickers": ["C", "A"],
      "window": {"in_sample": 3, "out_sample": 1, "unit": "calendar_months",
                 "allow_partial_tail": true},
      "specs": [{"strategy": "MV", "lambda": 0.7, "label": "my mv"}],
      "solver": {"kkt_tolerance": 1e-9, "max_iterations": 500, "erc_tolerance": 1e-7},
      "metrics": {"risk_free": 0.0001, "omega_threshold": 0.0002, "ir_reference": "my mv"},
      "network": {"normalization": "integral"},
      "backtest": {"rebalance_daily": true},
      "output_dir": "artifacts",
      "threads": 2
    })", "test");
    CHECK(cfg.data.format == CsvFormat::Long);
    CHECK_FALSE(cfg.data.is_returns);
    CHECK(cfg.tickers == std::vector<std::string>{"C", "A"});
    CHECK(cfg.backtest.unit == WindowUnit::CalendarMonths);
    CHECK(cfg.backtest.allow_partial_tail);
    CHECK(cfg.backtest.rebalance_daily);
    CHECK(cfg.backtest.solver.kkt_tolerance == 1e-9);
    CHECK(cfg.backtest.solver.max_iterations == 500);
    CHECK(cfg.backtest.solver.erc_tolerance == 1e-7);
    CHECK(cfg.backtest.normalization == ClusteringNormalization::Integral);
    CHECK(cfg.backtest.threads == 2);
    CHECK(cfg.metrics.risk_free == 0.0001);
    CHECK(cfg.metrics.omega_threshold == 0.0002);
    CHECK(cfg.metrics.ir_reference == "my mv");
    CHECK(cfg.output_dir == "artifacts");
    REQUIRE(cfg.specs.size() == 1);
    CHECK(cfg.specs[0].label == "my mv");
    CHECK(*cfg.specs[0].lambda == 0.7);
    CHECK_NOTHROW(validate_run_config(cfg));
}

TEST_CASE("spec labels are generated from the model naming scheme when omitted") {
    const RunConfig cfg = parse_run_config(R"({
      "data": {"path": "r.csv", "kind": "returns"},
      "window": {"in_sample": 10, "out_sample": 5},
      "specs": [
        {"strategy": "GMV", "estimator": "shrinkage", "risk_model": "network"},
        {"strategy": "ERC"},
        {"strategy": "EW"}
      ]
    })", "test");
    CHECK(cfg.specs[0].label == "NB-shrinkage GMV");
    CHECK(cfg.specs[1].label == "S-sample ERC");
    CHECK(cfg.specs[2].label == "EW");
}

TEST_CASE("config parse errors are config errors naming the problem") {
    CHECK_THROWS_AS(parse_run_config("{not json", "origin"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_run_config("{}", "origin"),
                         doctest::Contains("data"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_run_config(R"({"data": {"path": "x"},
        "window": {"in_sample": 10, "out_sample": 5},
        "specs": [{"strategy": "FOO"}]})", "origin"),
                         doctest::Contains("strategy"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_run_config(R"({"data": {"path": "x", "format": "diagonal"},
        "window": {"in_sample": 10, "out_sample": 5}})", "origin"),
                         doctest::Contains("format"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"data": {"path": "x"},
        "window": {"in_sample": "ten", "out_sample": 5}})", "origin"),
                    ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"data": {"path": "x"},
        "window": {"out_sample": 5}})", "origin"),
                    ConfigError);
    CHECK_THROWS_WITH_AS(parse_run_config(R"({"data": {"path": "x"},
        "window": {"in_sample": 10, "out_sample": 5},
        "specs": [{"strategy": "GMV", "estimator": "constant_correlation"}]})", "origin"),
                         doctest::Contains("estimator"), ConfigError);
}

TEST_CASE("cross-field validation") {
    auto base = [] {
        return parse_run_config(R"({
          "data": {"path": "r.csv", "kind": "returns"},
          "window": {"in_sample": 10, "out_sample": 5},
          "specs": [{"strategy": "GMV", "label": "one"}, {"strategy": "EW", "label": "EW"}]
        })", "test");
    };

    RunConfig dup = base();
    dup.specs[1].label = "one";
    dup.specs[1].strategy = Strategy::EW;
    CHECK_THROWS_WITH_AS(validate_run_config(dup), doctest::Contains("label"), ConfigError);

    RunConfig bad_ref = base();
    bad_ref.metrics.ir_reference = "missing model";
    CHECK_THROWS_AS(validate_run_config(bad_ref), ConfigError);

    RunConfig ew_ref = base();
    ew_ref.specs.erase(ew_ref.specs.begin() + 1);  // EW not listed, but "EW" stays valid
    CHECK_NOTHROW(validate_run_config(ew_ref));

    RunConfig bad_window = base();
    bad_window.backtest.out_sample = 0;
    CHECK_THROWS_AS(validate_run_config(bad_window), ConfigError);

    RunConfig bad_threads = base();
    bad_threads.backtest.threads = -1;
    CHECK_THROWS_AS(validate_run_config(bad_threads), ConfigError);

    RunConfig bad_tol = base();
    bad_tol.backtest.solver.erc_tolerance = 0.0;
    CHECK_THROWS_AS(validate_run_config(bad_tol), ConfigError);

    RunConfig dup_tickers = base();
    dup_tickers.tickers = {"A", "A"};
    CHECK_THROWS_AS(validate_run_config(dup_tickers), ConfigError);

    RunConfig no_specs = base();
    no_specs.specs.clear();
    CHECK_THROWS_AS(validate_run_config(no_specs), ConfigError);
}

TEST_CASE("ticker filter selects columns in filter order") {
    const auto panel = testsupport::random_panel(9, 10, 3);  // tickers A1, A2, A3
    const ReturnPanel picked = filter_tickers(panel, {"A3", "A1"});
    REQUIRE(picked.tickers() == std::vector<std::string>{"A3", "A1"});
    CHECK(picked.returns().col(0) == panel.returns().col(2));
    CHECK(picked.returns().col(1) == panel.returns().col(0));
    CHECK_THROWS_WITH_AS(filter_tickers(panel, {"A1", "NOPE"}),
                         doctest::Contains("NOPE"), ConfigError);
}

TEST_CASE("load_panel resolves paths against the workdir and converts prices") {
    TempDir dir("cfg_load");
    dir.write("prices.csv",
              "date,AAA\n2020-01-02,100\n2020-01-03,110\n2020-01-06,121\n");
    RunConfig cfg = parse_run_config(R"({
      "data": {"path": "prices.csv", "kind": "prices"},
      "window": {"in_sample": 1, "out_sample": 1}
    })", "test");
    const ReturnPanel panel = load_panel(cfg, dir.path());
    REQUIRE(panel.rows() == 2);
    CHECK(panel.returns()(0, 0) == doctest::Approx(std::log(1.1)).epsilon(1e-12));
    CHECK(panel.returns()(1, 0) == doctest::Approx(std::log(1.1)).epsilon(1e-12));
}

TEST_CASE("estimate command writes per-window covariances and the kappa table") {
    TempDir dir("cmd_estimate");
    write_panel(dir, 777, 30, 3);
    RunConfig cfg = parse_run_config(kMinimalConfig, "test");
    REQUIRE(cmd_estimate(cfg, dir.path()) == 0);

    const auto base = dir.path() / "out" / "estimate";
    // T=30, n=10, k=5: windows shift by 5 rows -> 4 of them.
    for (const char* name : {"window_001_sample.csv", "window_001_constant_correlation.csv",
                             "window_001_shrinkage.csv", "window_002_sample.csv",
                             "window_004_sample.csv", "kappa.csv", "manifest_estimate.json"})
        CHECK(std::filesystem::exists(base / name));
    CHECK_FALSE(std::filesystem::exists(base / "window_005_sample.csv"));

    const std::string kappa = slurp(base / "kappa.csv");
    CHECK(kappa.rfind("window,in_start,in_end,kappa\n", 0) == 0);
    CHECK(std::count(kappa.begin(), kappa.end(), '\n') == 5);  // header + 4 windows

    // The stored sample covariance round-trips through the CSV layer.
    const auto [tickers, sigma] = read_matrix_csv(base / "window_001_sample.csv");
    CHECK(tickers == std::vector<std::string>{"A1", "A2", "A3"});
    const auto panel = load_panel(cfg, dir.path());
    const Matrix expect = sample_covariance(panel.returns().topRows(10)).sigma;
    CHECK((sigma - expect).cwiseAbs().maxCoeff() <= 1e-12);

    const auto manifest = nlohmann::json::parse(slurp(base / "manifest_estimate.json"));
    CHECK(manifest.at("command") == "estimate");
    CHECK(manifest.at("config_hash").get<std::string>().rfind("fnv1a:", 0) == 0);
    CHECK(manifest.at("outputs").contains("kappa.csv"));

    // Re-running produces byte-identical artifacts.
    const std::string before = slurp(base / "window_002_shrinkage.csv");
    REQUIRE(cmd_estimate(cfg, dir.path()) == 0);
    CHECK(slurp(base / "window_002_shrinkage.csv") == before);
    CHECK(slurp(base / "kappa.csv") == kappa);
}

TEST_CASE("network command writes artifacts for every estimator used by the specs") {
    TempDir dir("cmd_network");
    write_panel(dir, 888, 30, 3);
    RunConfig cfg = parse_run_config(R"({
      "data": {"path": "returns.csv", "format": "wide", "kind": "returns"},
      "window": {"in_sample": 20, "out_sample": 10},
      "specs": [
        {"strategy": "GMV", "estimator": "sample", "risk_model": "network"},
        {"strategy": "GMV", "estimator": "shrinkage", "risk_model": "network"},
        {"strategy": "EW", "label": "EW"}
      ]
    })", "test");
    REQUIRE(cmd_network(cfg, dir.path()) == 0);

    const auto base = dir.path() / "out" / "network";
    for (const char* tag : {"sample", "shrinkage"})
        for (const char* suffix : {"W", "clustering", "C", "H", "edges"})
            CHECK(std::filesystem::exists(
                base / ("window_001_" + std::string(tag) + "_" + suffix + ".csv")));
    CHECK(std::filesystem::exists(base / "manifest_network.json"));

    // H artifacts carry the unit-trace invariant through serialization.
    const auto [tickers, h] = read_matrix_csv(base / "window_001_sample_H.csv");
    CHECK(std::abs(h.trace() - 1.0) <= 1e-9);  // CSV round-trip at 10 digits

    const std::string clustering = slurp(base / "window_001_sample_clustering.csv");
    CHECK(clustering.rfind("ticker,clustering\n", 0) == 0);
}

TEST_CASE("solve command reads a matrix and prints weights") {
    TempDir dir("cmd_solve");
    const auto matrix = dir.write("m.csv",
                                  "ticker,A,B\nA,0.04,0.0\nB,0.0,0.01\n");
    SolveOptions opt;
    opt.matrix_path = matrix;
    opt.strategy = "gmv";  // case-insensitive
    std::ostringstream out;
    REQUIRE(cmd_solve(opt, out) == 0);
    CHECK(out.str() == "ticker,weight\nA,2.0000000000e-01\nB,8.0000000000e-01\n");

    SUBCASE("optional file output") {
        opt.output = dir.path() / "w.csv";
        std::ostringstream again;
        REQUIRE(cmd_solve(opt, again) == 0);
        CHECK(slurp(opt.output) == again.str());
    }
    SUBCASE("mv needs lambda and a mean file") {
        opt.strategy = "MV";
        std::ostringstream sink;
        CHECK_THROWS_AS(cmd_solve(opt, sink), ConfigError);
        opt.lambda = 0.5;
        CHECK_THROWS_AS(cmd_solve(opt, sink), ConfigError);
        dir.write("mu.csv", "ticker,mean\nA,0.001\nB,0.002\n");
        opt.mean_path = dir.path() / "mu.csv";
        CHECK(cmd_solve(opt, sink) == 0);
    }
    SUBCASE("unknown strategy is a config error") {
        opt.strategy = "MAGIC";
        std::ostringstream sink;
        CHECK_THROWS_AS(cmd_solve(opt, sink), ConfigError);
    }
    SUBCASE("ragged matrix is a data error") {
        const auto bad = dir.write("bad.csv", "ticker,A,B\nA,0.04\nB,0.0,0.01\n");
        opt.matrix_path = bad;
        std::ostringstream sink;
        CHECK_THROWS_AS(cmd_solve(opt, sink), DataError);
    }
}

TEST_CASE("backtest command writes the full artifact set") {
    TempDir dir("cmd_backtest");
    write_panel(dir, 999, 30, 3);
    RunConfig cfg = parse_run_config(small_suite_config(), "test");
    REQUIRE(cmd_backtest(cfg, dir.path()) == 0);

    const auto base = dir.path() / "out";
    for (const char* frag : {"S-sample_GMV", "NB-sample_GMV", "EW"}) {
        CAPTURE(frag);
        CHECK(std::filesystem::exists(base / ("weights_" + std::string(frag) + ".csv")));
        CHECK(std::filesystem::exists(base / ("oos_returns_" + std::string(frag) + ".csv")));
        CHECK(std::filesystem::exists(base / ("cumulative_" + std::string(frag) + ".csv")));
    }

    const std::string summary = slurp(base / "summary.csv");
    CHECK(summary.rfind("model,mean,std,skew,kurt,SR,IR(EW),OR\n", 0) == 0);
    CHECK(summary.find("S-sample GMV,") != std::string::npos);
    CHECK(summary.find("NB-sample GMV,") != std::string::npos);
    // The reference row keeps its IR cell empty.
    std::istringstream lines(summary);
    std::string line;
    bool saw_ew = false;
    while (std::getline(lines, line)) {
        if (line.rfind("EW,", 0) == 0) {
            saw_ew = true;
            // Field 7 (IR) is empty: ",," straddles the last two commas.
            const auto fields = std::count(line.begin(), line.end(), ',');
            CHECK(fields == 7);
            CHECK(line.find(",,") != std::string::npos);
        }
    }
    CHECK(saw_ew);

    const auto manifest = nlohmann::json::parse(slurp(base / "manifest_backtest.json"));
    CHECK(manifest.at("command") == "backtest");
    REQUIRE(manifest.at("specs").size() == 3);
    for (const auto& s : manifest.at("specs")) CHECK(s.at("status") == "ok");

    // report rebuilds the identical summary from the stored series.
    const std::string json_before = slurp(base / "summary.json");
    std::filesystem::remove(base / "summary.csv");
    std::ostringstream printed;
    REQUIRE(cmd_report(cfg, dir.path(), printed) == 0);
    CHECK(printed.str() == summary);
    CHECK(slurp(base / "summary.csv") == summary);
    CHECK(slurp(base / "summary.json") == json_before);
}

TEST_CASE("backtest isolates a failing spec and maps its exit code") {
    TempDir dir("cmd_backtest_fail");
    // Asset A3 is constant in-sample: every estimator-based model rejects the
    // zero-variance column (riskless assets are treated as bad data, not
    // arbitraged); only EW, which never estimates, survives.
    auto panel = testsupport::random_panel(321, 30, 3);
    Matrix r = panel.returns();
    r.col(2).setZero();
    const ReturnPanel broken(panel.dates(), panel.tickers(), r);
    dir.write("returns.csv", testsupport::panel_to_returns_csv(broken));

    RunConfig cfg = parse_run_config(small_suite_config(), "test");
    CHECK(cmd_backtest(cfg, dir.path()) == 3);  // DataError from the first failed spec

    const auto base = dir.path() / "out";
    CHECK(std::filesystem::exists(base / "oos_returns_EW.csv"));
    CHECK_FALSE(std::filesystem::exists(base / "oos_returns_S-sample_GMV.csv"));
    CHECK_FALSE(std::filesystem::exists(base / "oos_returns_NB-sample_GMV.csv"));

    const auto manifest = nlohmann::json::parse(slurp(base / "manifest_backtest.json"));
    bool saw_error = false;
    for (const auto& s : manifest.at("specs")) {
        if (s.at("label") == "NB-sample GMV") {
            saw_error = true;
            CHECK(s.at("status") == "error");
            CHECK(s.at("exit_code") == 3);
            CHECK(s.at("error").get<std::string>().find("window 1 [") != std::string::npos);
            CHECK(s.at("error").get<std::string>().find("A3") != std::string::npos);
        }
        if (s.at("label") == "EW") CHECK(s.at("status") == "ok");
    }
    CHECK(saw_error);

    const std::string summary = slurp(base / "summary.csv");
    CHECK(summary.find("NB-sample GMV") == std::string::npos);  // failed rows are absent
    CHECK(summary.find("S-sample GMV") == std::string::npos);
    CHECK(summary.find("EW,") != std::string::npos);
}

TEST_CASE("an unlisted EW reference is run hidden") {
    TempDir dir("cmd_backtest_hidden");
    write_panel(dir, 555, 30, 3);
    RunConfig cfg = parse_run_config(R"({
      "data": {"path": "returns.csv", "format": "wide", "kind": "returns"},
      "window": {"in_sample": 10, "out_sample": 5},
      "specs": [{"strategy": "GMV"}]
    })", "test");
    REQUIRE(cmd_backtest(cfg, dir.path()) == 0);

    const auto base = dir.path() / "out";
    CHECK(std::filesystem::exists(base / "oos_returns_EW.csv"));  // hidden reference series
    const std::string summary = slurp(base / "summary.csv");
    CHECK(summary.find("\nEW,") == std::string::npos);  // but no EW summary row
    CHECK(summary.find("S-sample GMV,") != std::string::npos);
    // The GMV row still gets an IR against the hidden series.
    std::istringstream lines(summary);
    std::string header, row;
    std::getline(lines, header);
    std::getline(lines, row);
    CHECK(std::count(row.begin(), row.end(), ',') == 7);
    CHECK(row.find(",,") == std::string::npos);  // every cell populated
}

TEST_CASE("cli binary end to end") {
    TempDir dir("cli_e2e");
    write_panel(dir, 31337, 30, 3);
    dir.write("config.json", small_suite_config());

    std::string out;
    CHECK(run_cli("--version", dir, &out) == 0);
    CHECK(out.find("netfolio") != std::string::npos);

    CHECK(run_cli("--help", dir, &out) == 0);
    CHECK(out.find("backtest") != std::string::npos);

    CHECK(run_cli("", dir, &out) == 2);               // a subcommand is required
    CHECK(run_cli("--no-such-flag", dir, &out) == 2);  // unknown option

    const std::string wd = "--workdir " + dir.path().string();
    CHECK(run_cli(wd + " backtest -c config.json", dir, &out) == 0);
    CHECK(std::filesystem::exists(dir.path() / "out" / "summary.csv"));

    CHECK(run_cli(wd + " report -c config.json", dir, &out) == 0);
    CHECK(out.rfind("model,mean,std,skew,kurt,SR,IR(EW),OR\n", 0) == 0);

    CHECK(run_cli(wd + " estimate -c config.json", dir, &out) == 0);
    CHECK(std::filesystem::exists(dir.path() / "out" / "estimate" / "kappa.csv"));

    CHECK(run_cli(wd + " network -c config.json", dir, &out) == 0);
    CHECK(std::filesystem::exists(dir.path() / "out" / "network" /
                                  "window_001_sample_H.csv"));
}

TEST_CASE("cli maps error families to distinct exit codes") {
    TempDir dir("cli_codes");
    const std::string wd = "--workdir " + dir.path().string();
    std::string out;

    // 2: broken config JSON.
    dir.write("broken.json", "{\"data\":");
    CHECK(run_cli(wd + " backtest -c broken.json", dir, &out) == 2);

    // 2: config references an unknown strategy.
    dir.write("badspec.json", R"({"data": {"path": "returns.csv", "kind": "returns"},
      "window": {"in_sample": 10, "out_sample": 5},
      "specs": [{"strategy": "WARP"}]})");
    CHECK(run_cli(wd + " backtest -c badspec.json", dir, &out) == 2);

    // 3: data file missing.
    dir.write("nodata.json", R"({"data": {"path": "absent.csv", "kind": "returns"},
      "window": {"in_sample": 10, "out_sample": 5}})");
    CHECK(run_cli(wd + " backtest -c nodata.json", dir, &out) == 3);
    CHECK(out.find("absent.csv") != std::string::npos);

    // 4: solver starved of iterations reports non-convergence.
    write_panel(dir, 4242, 30, 3);
    dir.write("starved.json", R"({"data": {"path": "returns.csv", "kind": "returns"},
      "window": {"in_sample": 10, "out_sample": 5},
      "specs": [{"strategy": "ERC", "label": "starved ERC"}],
      "solver": {"erc_tolerance": 1e-30, "max_iterations": 4},
      "metrics": {"ir_reference": "starved ERC"}})");
    CHECK(run_cli(wd + " backtest -c starved.json", dir, &out) == 4);

    // 3: solve on a matrix with a non-positive diagonal.
    dir.write("bad_matrix.csv", "ticker,A,B\nA,-0.01,0.0\nB,0.0,0.02\n");
    CHECK(run_cli(wd + " solve --matrix bad_matrix.csv --strategy ERC", dir, &out) == 3);
}
