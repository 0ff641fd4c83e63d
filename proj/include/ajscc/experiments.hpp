#pragma once

// Seeded Monte-Carlo experiments and their tabulated output.
//
// Sub-seeds come from derive_seed(master_seed, stream, ...) keyed on the trial
// index only, so every sweep point sees the same source draws and the same
// noise realization (common random numbers). Results are written into
// per-(point, trial) slots and reduced in trial order, which makes the output
// bit-identical for any worker count.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ajscc/circuit_model.hpp"
#include "ajscc/mapping.hpp"
#include "ajscc/multisensor.hpp"
#include "ajscc/signal_chain.hpp"

namespace ajscc {

enum class ExperimentKind { MseVsL, SdrVsCsnr, RoundTrip, ClusterDemo };
enum class SourceDistribution { Uniform01, FixedPoint };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view text);

/// 10..45 step 5, 50..100 step 1, 105..150 step 5.
std::vector<int> default_level_grid();

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::MseVsL;
    SourceDistribution distribution = SourceDistribution::Uniform01;
    double fixed_x1 = 0.5;  // FixedPoint truth on the unit square
    double fixed_x2 = 0.5;
    int trials = 200;
    std::vector<int> levels = default_level_grid();  // swept by MseVsL and RoundTrip
    std::vector<double> snr_db = {-20.0};            // +inf means no noise
    Volts d_max = 5.0;
    Volts v2 = 1.0;
    int num_levels = 73;  // L for SdrVsCsnr and ClusterDemo
    QuantizerMode quantizer = QuantizerMode::Floor;
    std::uint64_t master_seed = 1;
    int sensor_count = 1;
    std::string output_path;
    unsigned workers = 1;

    FmConfig fm;
    ReceiverConfig rx;
    PowerConvention convention = PowerConvention::UnityPower;
    Hertz guard = 1000.0;
    AntennaMode antenna_mode = AntennaMode::Shared;
    int antennas = 1;

    // Round-trip suite fault injection.
    double circuit_gain_error = 0.0;
    Volts circuit_offset_error = 0.0;

    ComponentBudget budget = prototype_budget();
};

/// Throws ConfigError on empty ranges, trials < 1, or invalid embedded configs.
void validate(const ExperimentConfig& cfg);

struct SweepRow {
    double param = 0.0;
    double mean_mse = 0.0;
    double mean_sdr_db = 0.0;  // sdr(mean_mse)
    double mse_x1 = 0.0;
    double mse_x2 = 0.0;
    int trials = 0;
    std::optional<double> median_sdr_db;  // per-trial SDR median (SDR sweeps)
    std::optional<double> csnr_est_db;    // mean estimated CSNR (SDR sweeps)
};

struct SweepResult {
    std::string series;
    std::vector<SweepRow> rows;
    double best_param = 0.0;  // argmin of mean_mse, first on ties
    double best_mse = 0.0;

    bool extended() const;
};

/// Recomputes best_param / best_mse from rows.
void update_argmin(SweepResult& result);

/// MSE against L for the single SNR in cfg.snr_db. Sources ~ cfg.distribution
/// on the unit square, scaled to [0, v1] x [0, v2]; errors are measured back
/// on the unit square.
SweepResult run_mse_vs_L(const ExperimentConfig& cfg);

/// One series per (sensor count c in 1..sensor_count, sensor) named
/// "n<c>_s<i>", plus "n<c>_sum" whose MSE is summed over the c sensors.
/// Rows are keyed by configured SNR.
std::vector<SweepResult> run_sdr_vs_csnr(const ExperimentConfig& cfg);

struct ClusterTrial {
    std::vector<SensorResult> sensors;
    std::vector<MetricsReport> metrics;  // normalized, per sensor
};

/// Single cluster run at cfg.snr_db.front() with sensor_count sensors.
ClusterTrial run_cluster_demo(const ExperimentConfig& cfg, std::uint64_t trial = 0);

struct CheckResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;      // largest observed error
    double tolerance = 0.0;
    long samples = 0;
};

struct RoundTripReport {
    std::vector<CheckResult> checks;
    bool passed() const;
};

/// Mapping, 3:1 nesting, circuit equivalence (with cfg's injected circuit
/// errors) and the noiseless chain over seeded inputs, one check each.
RoundTripReport run_roundtrip_suite(const ExperimentConfig& cfg);

// CSV: header, then one row per sweep point. Columns are
// param,mean_mse,mean_sdr_db,mse_x1,mse_x2,trials, followed by
// median_sdr_db,csnr_est_db for SDR sweeps. Numbers use the shortest
// round-trip decimal form regardless of locale. Existing files are replaced.
std::string format_csv(const SweepResult& result);
void emit_csv(const SweepResult& result, const std::string& path);
SweepResult parse_csv(std::string_view text);
SweepResult read_csv(const std::string& path);

std::string to_json(const std::vector<SweepResult>& results);
std::string to_json(const RoundTripReport& report);

/// Flat key=value text, '#' starts a comment. Keys mirror ExperimentConfig
/// field names; lists are comma separated and accept start:stop:step ranges.
ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::string& path);

/// Applies one key=value pair; shared by the config file and the CLI.
void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value);

std::vector<int> parse_int_list(std::string_view text);
std::vector<double> parse_double_list(std::string_view text);

}  // namespace ajscc
