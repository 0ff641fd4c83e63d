#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ajscc/circuit_model.hpp"
#include "ajscc/errors.hpp"
#include "ajscc/experiments.hpp"
#include "ajscc/mapping.hpp"
#include "ajscc/metrics.hpp"
#include "ajscc/signal_chain.hpp"

using namespace ajscc;
using nlohmann::json;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string seed;
    std::string trials;
    std::string snr_db;
    std::string dmax;
    std::string levels;
    std::string quantizer;
    std::string workers;
    std::string sensors;
    std::string out;
    std::string format = "csv";
    std::vector<std::string> sets;  // extra key=value overrides
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "key=value experiment file");
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--trials", f.trials, "Monte-Carlo trials per point");
    cmd->add_option("--snr-db", f.snr_db, "SNR list, e.g. -30:0:5 or inf");
    cmd->add_option("--dmax", f.dmax, "maximum encoded voltage");
    cmd->add_option("--levels", f.levels, "level count(s), e.g. 10:150:5");
    cmd->add_option("--quantizer", f.quantizer, "floor or nearest");
    cmd->add_option("--workers", f.workers, "worker threads");
    cmd->add_option("--sensors", f.sensors, "sensor count");
    cmd->add_option("--out", f.out, "output file (default stdout)");
    cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--set", f.sets, "extra key=value override (repeatable)");
}

ExperimentConfig build_config(const CommonFlags& f, ExperimentKind kind, bool levels_is_count) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    if (!f.config_path.empty()) {
        cfg = load_experiment_config(f.config_path);
        cfg.kind = kind;
    }
    auto apply = [&](const char* key, const std::string& v) {
        if (!v.empty()) set_config_value(cfg, key, v);
    };
    apply("master_seed", f.seed);
    apply("trials", f.trials);
    apply("snr_db", f.snr_db);
    apply("d_max", f.dmax);
    apply(levels_is_count ? "num_levels" : "levels", f.levels);
    apply("quantizer", f.quantizer);
    apply("workers", f.workers);
    apply("sensor_count", f.sensors);
    for (const auto& kv : f.sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    validate(cfg);
    return cfg;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    if (!out) throw IoError("write to '" + path + "' failed");
}

// Several series to CSV: one file per series next to --out, or blocks
// separated by "# <series>" lines on stdout.
void write_series(const std::vector<SweepResult>& results, const CommonFlags& f) {
    if (f.format == "json") {
        write_text(f.out, to_json(results));
        return;
    }
    if (results.size() == 1) {
        if (f.out.empty())
            write_text("", format_csv(results[0]));
        else
            emit_csv(results[0], f.out);
        return;
    }
    if (f.out.empty()) {
        for (const auto& r : results) std::cout << "# " << r.series << '\n' << format_csv(r);
        return;
    }
    std::filesystem::path base(f.out);
    for (const auto& r : results) {
        auto p = base.parent_path() / (base.stem().string() + "_" + r.series + base.extension().string());
        emit_csv(r, p.string());
    }
}

json decoded_json(const DecodedPair& d) {
    return {{"x1_hat", d.x1_hat}, {"x2_hat", d.x2_hat}, {"level", d.level_index}};
}

void print_error(const std::string& kind, const std::string& message) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Analog joint source-channel coding simulator"};
    app.require_subcommand(1);

    // encode / decode
    double x1 = 0.0, x2 = 0.0, v = 0.0, dmax = 5.0, v2 = 1.0;
    int levels = 73;
    std::string quantizer = "floor";
    auto add_mapping = [&](CLI::App* cmd) {
        cmd->add_option("--dmax", dmax, "maximum encoded voltage");
        cmd->add_option("--v2", v2, "x2 range");
        cmd->add_option("--levels", levels, "number of levels L");
        cmd->add_option("--quantizer", quantizer, "floor or nearest");
    };
    auto mapping_from_flags = [&] { return make_config(dmax, levels, v2, parse_quantizer_mode(quantizer)); };

    auto* enc = app.add_subcommand("encode", "map (x1, x2) to one voltage");
    enc->add_option("--x1", x1, "x1 in [0, Dmax/L]")->required();
    enc->add_option("--x2", x2, "x2 in [0, V2]")->required();
    add_mapping(enc);

    auto* dec = app.add_subcommand("decode", "recover (x1, x2) from a voltage");
    dec->add_option("--v", v, "received voltage")->required();
    add_mapping(dec);

    // chain: one sample through modulator, channel and receiver
    double snr = INFINITY;
    std::uint64_t seed = 1;
    auto* chain = app.add_subcommand("chain", "encode, transmit over AWGN, detect and decode one sample");
    chain->add_option("--x1", x1, "x1 in [0, Dmax/L]")->required();
    chain->add_option("--x2", x2, "x2 in [0, V2]")->required();
    chain->add_option("--snr-db", snr, "channel SNR in dB (inf for none)");
    chain->add_option("--seed", seed, "noise seed");
    add_mapping(chain);

    CommonFlags sweep_flags, sdr_flags, cluster_flags, selftest_flags;
    auto* sweep = app.add_subcommand("sweep-l", "MSE against the number of levels");
    add_common(sweep, sweep_flags);
    auto* sdr_cmd = app.add_subcommand("sdr-sweep", "SDR against channel SNR for 1..N sensors");
    add_common(sdr_cmd, sdr_flags);
    auto* cluster = app.add_subcommand("cluster", "one FDMA cluster capture");
    add_common(cluster, cluster_flags);
    std::uint64_t cluster_trial = 0;
    cluster->add_option("--trial", cluster_trial, "trial index for noise seeding");
    auto* selftest = app.add_subcommand("selftest", "seeded round-trip checks");
    add_common(selftest, selftest_flags);

    auto* power = app.add_subcommand("power", "encoder power budget");
    CommonFlags power_flags;
    power->add_option("--config", power_flags.config_path, "key=value experiment file");
    power->add_option("--set", power_flags.sets, "budget override key=value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        print_error("usage", e.what());
        return 2;
    }

    try {
        if (*enc) {
            auto cfg = mapping_from_flags();
            double vd = encode(cfg, {x1, x2});
            std::cout << json{{"vd", vd}, {"level", quantize_level(cfg, x2)}}.dump() << '\n';
        } else if (*dec) {
            auto cfg = mapping_from_flags();
            std::cout << decoded_json(decode(cfg, v)).dump() << '\n';
        } else if (*chain) {
            auto cfg = mapping_from_flags();
            FmConfig fm;
            validate(fm, cfg.d_max);
            ChannelSpec ch;
            ch.snr_db = snr;
            ch.rng_seed = seed;
            double vd = encode(cfg, {x1, x2});
            auto res = transmit_receive_detail(fm, ch, ReceiverConfig{}, vd);
            auto d = decode(cfg, res.v_hat);
            json out = decoded_json(d);
            out["vd"] = vd;
            out["v_hat"] = res.v_hat;
            out["peak_hz"] = res.peak.frequency;
            out["mse"] = mse({x1, x2}, d);
            std::cout << out.dump() << '\n';
        } else if (*sweep) {
            auto cfg = build_config(sweep_flags, ExperimentKind::MseVsL, false);
            write_series({run_mse_vs_L(cfg)}, sweep_flags);
        } else if (*sdr_cmd) {
            auto cfg = build_config(sdr_flags, ExperimentKind::SdrVsCsnr, true);
            write_series(run_sdr_vs_csnr(cfg), sdr_flags);
        } else if (*cluster) {
            auto cfg = build_config(cluster_flags, ExperimentKind::ClusterDemo, true);
            auto demo = run_cluster_demo(cfg, cluster_trial);
            json rows = json::array();
            for (std::size_t i = 0; i < demo.sensors.size(); ++i) {
                const auto& s = demo.sensors[i];
                rows.push_back({{"id", s.id},
                                {"v_true", s.v_true},
                                {"v_hat", s.v_hat},
                                {"peak_hz", s.peak.frequency},
                                {"decoded", decoded_json(s.decoded)},
                                {"mse", demo.metrics[i].mse},
                                {"sdr_db", demo.metrics[i].sdr_db},
                                {"csnr_db", s.csnr_db}});
            }
            write_text(cluster_flags.out, rows.dump(2));
        } else if (*selftest) {
            auto cfg = build_config(selftest_flags, ExperimentKind::RoundTrip, false);
            auto report = run_roundtrip_suite(cfg);
            write_text(selftest_flags.out, to_json(report));
            if (!report.passed()) {
                std::string failed;
                for (const auto& c : report.checks)
                    if (!c.passed) failed += (failed.empty() ? "" : ", ") + c.name;
                print_error("selftest", "failed checks: " + failed);
                return 1;
            }
        } else if (*power) {
            auto cfg = build_config(power_flags, ExperimentKind::RoundTrip, false);
            const auto& b = cfg.budget;
            std::cout << json{{"opamps", b.opamp_count},
                              {"comparators", b.comparator_count},
                              {"muxes", b.mux_count},
                              {"total_w", estimate_power(b)}}
                             .dump()
                      << '\n';
        }
    } catch (const Error& e) {
        print_error(e.kind(), e.what());
        return 1;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 1;
    }
    return 0;
}
