#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "ajscc/errors.hpp"
#include "ajscc/experiments.hpp"

using namespace ajscc;

namespace {

std::size_t count_lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("default level grid") {
    auto g = default_level_grid();
    CHECK(g.front() == 10);
    CHECK(g.back() == 150);
    CHECK(g.size() == 69);
    CHECK(std::count(g.begin(), g.end(), 73) == 1);
    CHECK(std::is_sorted(g.begin(), g.end()));
}

TEST_CASE("experiment config validation") {
    ExperimentConfig cfg;
    CHECK_NOTHROW(validate(cfg));
    cfg.trials = 0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.levels.clear();
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.snr_db.clear();
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.levels = {1};
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.d_max = 40.0;  // 40 kHz above Nyquist
    CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("noiseless MSE-vs-L follows the quantization oracle") {
    // Floor quantization with reconstruction at the line height leaves an
    // x2 error uniform on [0, delta): E = delta^2 / 3 on the unit square.
    // The receiver rounds to the nearest 1 Hz bin, a uniform +-0.5 mV error,
    // which is (1e-3)^2 / 12 * (L / d_max)^2 after normalizing x1 by v1.
    ExperimentConfig cfg;
    cfg.levels = {10, 40, 120};
    cfg.snr_db = {INFINITY};
    cfg.trials = 200;
    auto res = run_mse_vs_L(cfg);
    REQUIRE(res.rows.size() == 3);
    for (const auto& row : res.rows) {
        double L = row.param;
        double x2_oracle = 1.0 / (3.0 * (L - 1) * (L - 1));
        double x1_oracle = 1e-6 / 12.0 * (L / 5.0) * (L / 5.0);
        CHECK(row.mse_x2 == doctest::Approx(x2_oracle).epsilon(0.25));
        CHECK(row.mse_x1 == doctest::Approx(x1_oracle).epsilon(0.3));
        CHECK(row.mean_mse == doctest::Approx(row.mse_x1 + row.mse_x2));
        CHECK(row.mean_sdr_db == doctest::Approx(-10 * std::log10(row.mean_mse)));
        CHECK(row.trials == 200);
    }
    auto best = std::min_element(res.rows.begin(), res.rows.end(),
                                 [](auto& a, auto& b) { return a.mean_mse < b.mean_mse; });
    CHECK(res.best_param == best->param);
    CHECK(res.best_mse == best->mean_mse);
}

TEST_CASE("MSE-vs-L rejects several SNRs") {
    ExperimentConfig cfg;
    cfg.snr_db = {-20, -10};
    CHECK_THROWS_AS(run_mse_vs_L(cfg), ConfigError);
}

TEST_CASE("sweep output does not depend on the worker count") {
    ExperimentConfig cfg;
    cfg.levels = {20, 60};
    cfg.snr_db = {-25.0};
    cfg.trials = 12;
    cfg.workers = 1;
    auto serial = format_csv(run_mse_vs_L(cfg));
    cfg.workers = 4;
    CHECK(format_csv(run_mse_vs_L(cfg)) == serial);
    cfg.master_seed = 2;
    CHECK(format_csv(run_mse_vs_L(cfg)) != serial);
}

TEST_CASE("SDR sweep series layout") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::SdrVsCsnr;
    cfg.sensor_count = 2;
    cfg.trials = 6;
    cfg.snr_db = {-30.0, 0.0};
    cfg.num_levels = 30;
    auto series = run_sdr_vs_csnr(cfg);
    std::vector<std::string> names;
    for (auto& s : series) names.push_back(s.series);
    CHECK(names == std::vector<std::string>{"n1_s0", "n1_sum", "n2_s0", "n2_s1", "n2_sum"});
    for (auto& s : series) {
        REQUIRE(s.rows.size() == 2);
        CHECK(s.rows[0].param == -30.0);
        CHECK(s.rows[0].median_sdr_db.has_value());
        CHECK(s.rows[0].csnr_est_db.has_value());
    }
    // Sum series adds per-sensor MSE.
    CHECK(series[4].rows[1].mean_mse ==
          doctest::Approx(series[2].rows[1].mean_mse + series[3].rows[1].mean_mse));
}

TEST_CASE("cluster demo") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::ClusterDemo;
    cfg.sensor_count = 3;
    cfg.snr_db = {INFINITY};
    cfg.num_levels = 25;
    auto demo = run_cluster_demo(cfg);
    REQUIRE(demo.sensors.size() == 3);
    REQUIRE(demo.metrics.size() == 3);
    for (auto& m : demo.metrics) CHECK(m.mse_x2 <= 1.0 / (24.0 * 24.0) + 1e-12);
}

TEST_CASE("round-trip suite") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::RoundTrip;
    cfg.levels = {5, 50, 73};
    cfg.trials = 100;

    SUBCASE("defaults pass") {
        auto rep = run_roundtrip_suite(cfg);
        CHECK(rep.passed());
        CHECK(rep.checks.size() == 6);
    }
    SUBCASE("nearest-line quantizer passes") {
        cfg.quantizer = QuantizerMode::NearestLine;
        CHECK(run_roundtrip_suite(cfg).passed());
    }
    SUBCASE("5% VCVS gain error breaks circuit equivalence") {
        cfg.circuit_gain_error = 0.05;
        auto rep = run_roundtrip_suite(cfg);
        CHECK_FALSE(rep.passed());
        auto it = std::find_if(rep.checks.begin(), rep.checks.end(),
                               [](auto& c) { return c.name == "circuit.equivalence"; });
        REQUIRE(it != rep.checks.end());
        CHECK_FALSE(it->passed);
        // Type-1 output is min(1.05 vt, V_R) against vt; the largest gap on
        // the 100-point vt grid sits just below the clamp.
        double expect = 0.0;
        for (int i = 0; i < 100; ++i) {
            double vt = i / 99.0;
            expect = std::max(expect, std::min(1.05 * vt, 1.0) - vt);
        }
        CHECK(it->worst == doctest::Approx(expect).epsilon(1e-9));
        auto json = nlohmann::json::parse(to_json(rep));
        CHECK(json["passed"] == false);
    }
    SUBCASE("empty range is a config error") {
        cfg.levels.clear();
        CHECK_THROWS_AS(run_roundtrip_suite(cfg), ConfigError);
    }
}

TEST_CASE("CSV emission and parsing") {
    SweepResult res;
    res.series = "demo";
    res.rows = {{10, 1e-3, 30, 4e-4, 6e-4, 5, {}, {}},
                {20, 2.5e-4, 36.0206, 1e-4, 1.5e-4, 5, {}, {}},
                {30, 0.1 + 0.2, 5.2287874528033758, 0.1, 0.2 + 1e-17, 5, {}, {}}};
    update_argmin(res);
    CHECK(res.best_param == 20);

    std::string text = format_csv(res);
    CHECK(count_lines(text) == 4);
    CHECK(text.rfind("param,mean_mse,mean_sdr_db,mse_x1,mse_x2,trials\n", 0) == 0);

    auto path = temp_path("ajscc_csv_test.csv");
    emit_csv(res, path);
    auto back = read_csv(path);
    REQUIRE(back.rows.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.rows[i].param == res.rows[i].param);
        CHECK(back.rows[i].mean_mse == res.rows[i].mean_mse);
        CHECK(back.rows[i].mean_sdr_db == res.rows[i].mean_sdr_db);
        CHECK(back.rows[i].mse_x1 == res.rows[i].mse_x1);
        CHECK(back.rows[i].mse_x2 == res.rows[i].mse_x2);
        CHECK(back.rows[i].trials == res.rows[i].trials);
    }

    // Emitting again replaces the file rather than appending.
    res.rows.pop_back();
    emit_csv(res, path);
    CHECK(read_csv(path).rows.size() == 2);
    std::remove(path.c_str());

    CHECK_THROWS_AS(parse_csv("nonsense\n1,2\n"), IoError);
    CHECK_THROWS_AS(emit_csv(res, "/nonexistent-dir/x.csv"), IoError);
}

TEST_CASE("extended CSV columns for SDR sweeps") {
    SweepResult res;
    res.rows = {{-20, 1e-3, 30, 4e-4, 6e-4, 5, 31.5, -21.2}, {INFINITY, 1e-4, 40, 5e-5, 5e-5, 5, 41.0, 200.0}};
    auto text = format_csv(res);
    CHECK(text.rfind("param,mean_mse,mean_sdr_db,mse_x1,mse_x2,trials,median_sdr_db,csnr_est_db\n", 0) == 0);
    auto back = parse_csv(text);
    REQUIRE(back.rows.size() == 2);
    CHECK(std::isinf(back.rows[1].param));
    CHECK(*back.rows[0].median_sdr_db == 31.5);
    CHECK(*back.rows[1].csnr_est_db == 200.0);

    auto json = nlohmann::json::parse(to_json(std::vector<SweepResult>{res}));
    CHECK(json[0]["rows"][0]["median_sdr_db"] == 31.5);
    CHECK(json[0]["rows"][1]["param"] == "inf");
}

TEST_CASE("config file parsing") {
    auto cfg = parse_experiment_config(R"(
# level sweep
kind = mse_vs_l
levels = 10:20:5, 73
snr_db = -20
trials = 50   # per point
quantizer = nearest
master_seed = 9
distribution = fixed
fixed_x1 = 0.25
fixed_x2 = 0.75
opamp_count = 3
antenna_mode = diversity
antennas = 2
)");
    CHECK(cfg.kind == ExperimentKind::MseVsL);
    CHECK(cfg.levels == std::vector<int>{10, 15, 20, 73});
    CHECK(cfg.snr_db == std::vector<double>{-20.0});
    CHECK(cfg.trials == 50);
    CHECK(cfg.quantizer == QuantizerMode::NearestLine);
    CHECK(cfg.master_seed == 9);
    CHECK(cfg.distribution == SourceDistribution::FixedPoint);
    CHECK(cfg.fixed_x2 == 0.75);
    CHECK(cfg.budget.opamp_count == 3);
    CHECK(cfg.antenna_mode == AntennaMode::Diversity);
    CHECK(cfg.antennas == 2);

    CHECK_THROWS_AS(parse_experiment_config("bogus = 1"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("trials"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("trials = ten"), ConfigError);
    CHECK_THROWS_AS(load_experiment_config("/nonexistent/file.cfg"), IoError);

    CHECK(parse_double_list("-30:0:10, inf") == std::vector<double>{-30, -20, -10, 0, INFINITY});
    CHECK_THROWS_AS(parse_int_list("1:5:0"), ConfigError);
}
