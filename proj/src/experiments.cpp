#include "ajscc/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "ajscc/errors.hpp"
#include "ajscc/metrics.hpp"
#include "ajscc/parallel.hpp"
#include "ajscc/seeding.hpp"

namespace ajscc {

namespace {

std::string_view trim(std::string_view s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("not a number: '" + std::string(text) + "'");
    }
    return v;
}

long long parse_integer(std::string_view text) {
    text = trim(text);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("not an integer: '" + std::string(text) + "'");
    }
    return v;
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

struct TrialError {
    double e1 = 0.0;
    double e2 = 0.0;
};

SourceSample unit_source(const ExperimentConfig& cfg, std::uint64_t trial, std::uint64_t sensor) {
    if (cfg.distribution == SourceDistribution::FixedPoint) return {cfg.fixed_x1, cfg.fixed_x2};
    std::mt19937_64 eng(derive_seed(cfg.master_seed, Stream::Source, trial, sensor));
    double a = uniform01(eng);
    double b = uniform01(eng);
    return {a, b};
}

SourceSample scale_to(const MappingConfig& m, const SourceSample& unit) {
    return {unit.x1 * m.v1, unit.x2 * m.v2};
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    auto n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

SweepRow reduce_row(double param, const std::vector<TrialError>& errs) {
    SweepRow row;
    row.param = param;
    row.trials = static_cast<int>(errs.size());
    for (const auto& e : errs) {
        row.mse_x1 += e.e1;
        row.mse_x2 += e.e2;
    }
    row.mse_x1 /= row.trials;
    row.mse_x2 /= row.trials;
    row.mean_mse = row.mse_x1 + row.mse_x2;
    row.mean_sdr_db = sdr(row.mean_mse);
    return row;
}

ChannelSpec channel_for(const ExperimentConfig& cfg, double snr_db, std::uint64_t trial) {
    ChannelSpec ch;
    ch.snr_db = snr_db;
    ch.convention = cfg.convention;
    ch.rng_seed = derive_seed(cfg.master_seed, Stream::Noise, trial);
    return ch;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::MseVsL: return "mse_vs_l";
        case ExperimentKind::SdrVsCsnr: return "sdr_vs_csnr";
        case ExperimentKind::RoundTrip: return "roundtrip";
        case ExperimentKind::ClusterDemo: return "cluster";
    }
    return "mse_vs_l";
}

ExperimentKind parse_experiment_kind(std::string_view text) {
    for (auto k : {ExperimentKind::MseVsL, ExperimentKind::SdrVsCsnr, ExperimentKind::RoundTrip,
                   ExperimentKind::ClusterDemo}) {
        if (to_string(k) == text) return k;
    }
    throw ConfigError("unknown experiment kind '" + std::string(text) + "'");
}

std::vector<int> default_level_grid() {
    std::vector<int> grid;
    for (int l = 10; l < 50; l += 5) grid.push_back(l);
    for (int l = 50; l <= 100; ++l) grid.push_back(l);
    for (int l = 105; l <= 150; l += 5) grid.push_back(l);
    return grid;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
    if (cfg.levels.empty()) throw ConfigError("level range is empty");
    if (cfg.snr_db.empty()) throw ConfigError("SNR range is empty");
    for (int l : cfg.levels) make_config(cfg.d_max, l, cfg.v2, cfg.quantizer);
    make_config(cfg.d_max, cfg.num_levels, cfg.v2, cfg.quantizer);
    for (double s : cfg.snr_db) {
        if (std::isnan(s) || (std::isinf(s) && s < 0)) throw ConfigError("SNR must be a number or +inf");
    }
    if (cfg.distribution == SourceDistribution::FixedPoint &&
        (cfg.fixed_x1 < 0.0 || cfg.fixed_x1 > 1.0 || cfg.fixed_x2 < 0.0 || cfg.fixed_x2 > 1.0)) {
        throw ConfigError("fixed source point must lie in the unit square");
    }
    if (cfg.sensor_count < 1) throw ConfigError("sensor_count must be at least 1");
    validate(cfg.fm, cfg.d_max);
    if (cfg.rx.fft_size > cfg.fm.num_samples()) throw ConfigError("fft_size exceeds record length");
}

bool SweepResult::extended() const {
    return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) {
        return r.median_sdr_db.has_value() || r.csnr_est_db.has_value();
    });
}

void update_argmin(SweepResult& result) {
    if (result.rows.empty()) return;
    auto best = std::min_element(result.rows.begin(), result.rows.end(),
                                 [](const SweepRow& a, const SweepRow& b) { return a.mean_mse < b.mean_mse; });
    result.best_param = best->param;
    result.best_mse = best->mean_mse;
}

SweepResult run_mse_vs_L(const ExperimentConfig& cfg) {
    validate(cfg);
    if (cfg.snr_db.size() != 1) throw ConfigError("MSE-vs-L sweep takes exactly one SNR");
    const double snr = cfg.snr_db.front();
    const std::size_t points = cfg.levels.size();
    const std::size_t trials = static_cast<std::size_t>(cfg.trials);

    std::vector<TrialError> errs(points * trials);
    parallel_for(errs.size(), cfg.workers, [&](std::size_t idx) {
        std::size_t p = idx / trials;
        std::size_t t = idx % trials;
        MappingConfig m = make_config(cfg.d_max, cfg.levels[p], cfg.v2, cfg.quantizer);
        SourceSample unit = unit_source(cfg, t, 0);
        SourceSample truth = scale_to(m, unit);
        Volts v_hat = transmit_receive(cfg.fm, channel_for(cfg, snr, t), cfg.rx, encode(m, truth));
        MetricsReport r = normalized_report(truth, decode(m, v_hat), m.v1, m.v2);
        errs[idx] = {r.mse_x1, r.mse_x2};
    });

    SweepResult result;
    result.series = "snr_" + format_number(snr);
    for (std::size_t p = 0; p < points; ++p) {
        std::vector<TrialError> slice(errs.begin() + static_cast<std::ptrdiff_t>(p * trials),
                                      errs.begin() + static_cast<std::ptrdiff_t>((p + 1) * trials));
        result.rows.push_back(reduce_row(cfg.levels[p], slice));
    }
    update_argmin(result);
    return result;
}

namespace {

std::vector<SensorNode> make_sensors(const ExperimentConfig& cfg, int count, std::uint64_t trial) {
    MappingConfig m = make_config(cfg.d_max, cfg.num_levels, cfg.v2, cfg.quantizer);
    std::vector<SensorNode> sensors;
    for (int i = 0; i < count; ++i) {
        SensorNode s;
        s.id = i;
        s.mapping = m;
        s.fm = cfg.fm;
        s.truth = scale_to(m, unit_source(cfg, trial, static_cast<std::uint64_t>(i)));
        sensors.push_back(s);
    }
    return sensors;
}

ClusterOptions cluster_options(const ExperimentConfig& cfg, std::uint64_t trial) {
    ClusterOptions opts;
    opts.mode = cfg.antenna_mode;
    opts.antennas = cfg.antennas;
    opts.master_seed = cfg.master_seed;
    opts.trial = trial;
    return opts;
}

struct SensorTrial {
    double e1 = 0.0;
    double e2 = 0.0;
    double csnr = 0.0;
};

}  // namespace

std::vector<SweepResult> run_sdr_vs_csnr(const ExperimentConfig& cfg) {
    validate(cfg);
    const std::size_t snrs = cfg.snr_db.size();
    const std::size_t trials = static_cast<std::size_t>(cfg.trials);
    std::vector<SweepResult> out;

    for (int c = 1; c <= cfg.sensor_count; ++c) {
        FdmaPlan plan = assign_channels(c, cfg.fm, cfg.d_max, cfg.guard);
        const std::size_t nc = static_cast<std::size_t>(c);
        std::vector<SensorTrial> cells(snrs * trials * nc);

        parallel_for(snrs * trials, cfg.workers, [&](std::size_t idx) {
            std::size_t si = idx / trials;
            std::size_t t = idx % trials;
            auto sensors = make_sensors(cfg, c, t);
            std::vector<ChannelSpec> channels(nc);
            for (auto& ch : channels) {
                ch.snr_db = cfg.snr_db[si];
                ch.convention = cfg.convention;
            }
            auto results = simulate_cluster(sensors, plan, channels, cfg.rx, cluster_options(cfg, t));
            for (std::size_t i = 0; i < nc; ++i) {
                const auto& m = sensors[i].mapping;
                MetricsReport r = normalized_report(sensors[i].truth, results[i].decoded, m.v1, m.v2);
                cells[idx * nc + i] = {r.mse_x1, r.mse_x2, results[i].csnr_db};
            }
        });

        auto series_for = [&](std::optional<std::size_t> sensor) {
            SweepResult res;
            res.series = "n" + std::to_string(c) +
                         (sensor ? "_s" + std::to_string(*sensor) : std::string("_sum"));
            for (std::size_t si = 0; si < snrs; ++si) {
                std::vector<TrialError> errs;
                std::vector<double> sdrs;
                double csnr = 0.0;
                for (std::size_t t = 0; t < trials; ++t) {
                    TrialError e;
                    double cs = 0.0;
                    for (std::size_t i = 0; i < nc; ++i) {
                        if (sensor && *sensor != i) continue;
                        const auto& cell = cells[(si * trials + t) * nc + i];
                        e.e1 += cell.e1;
                        e.e2 += cell.e2;
                        cs += cell.csnr;
                    }
                    cs /= sensor ? 1.0 : static_cast<double>(nc);
                    errs.push_back(e);
                    sdrs.push_back(sdr(e.e1 + e.e2));
                    csnr += cs;
                }
                SweepRow row = reduce_row(cfg.snr_db[si], errs);
                row.median_sdr_db = median_of(sdrs);
                row.csnr_est_db = csnr / static_cast<double>(trials);
                res.rows.push_back(row);
            }
            update_argmin(res);
            return res;
        };

        for (std::size_t i = 0; i < nc; ++i) out.push_back(series_for(i));
        out.push_back(series_for(std::nullopt));
    }
    return out;
}

ClusterTrial run_cluster_demo(const ExperimentConfig& cfg, std::uint64_t trial) {
    validate(cfg);
    FdmaPlan plan = assign_channels(cfg.sensor_count, cfg.fm, cfg.d_max, cfg.guard);
    auto sensors = make_sensors(cfg, cfg.sensor_count, trial);
    std::vector<ChannelSpec> channels(sensors.size());
    for (auto& ch : channels) {
        ch.snr_db = cfg.snr_db.front();
        ch.convention = cfg.convention;
    }
    ClusterTrial out;
    out.sensors = simulate_cluster(sensors, plan, channels, cfg.rx, cluster_options(cfg, trial));
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        const auto& m = sensors[i].mapping;
        auto r = normalized_report(sensors[i].truth, out.sensors[i].decoded, m.v1, m.v2);
        r.csnr_db = out.sensors[i].csnr_db;
        out.metrics.push_back(r);
    }
    return out;
}

bool RoundTripReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

RoundTripReport run_roundtrip_suite(const ExperimentConfig& cfg) {
    validate(cfg);
    RoundTripReport report;
    const auto trials = static_cast<std::uint64_t>(cfg.trials);
    const bool nearest = cfg.quantizer == QuantizerMode::NearestLine;

    {
        CheckResult x1{"mapping.roundtrip_x1", true, 0.0, 0.0, 0};
        CheckResult x2{"mapping.roundtrip_x2", true, 0.0, 0.0, 0};
        CheckResult amp{"mapping.amplitude_bound", true, 0.0, 0.0, 0};
        for (std::size_t p = 0; p < cfg.levels.size(); ++p) {
            MappingConfig m = make_config(cfg.d_max, cfg.levels[p], cfg.v2, cfg.quantizer);
            double x1_tol = 1e-12 * m.d_max;
            double x2_tol = (nearest ? 0.5 : 1.0) * m.delta + 1e-12 * m.v2;
            x1.tolerance = std::max(x1.tolerance, x1_tol);
            x2.tolerance = std::max(x2.tolerance, x2_tol);
            for (std::uint64_t t = 0; t < trials; ++t) {
                std::mt19937_64 eng(derive_seed(cfg.master_seed, Stream::Source, t, p));
                SourceSample s{uniform01(eng) * m.v1, uniform01(eng) * m.v2};
                Volts v = encode(m, s);
                DecodedPair d = decode(m, v);
                double e1 = std::abs(d.x1_hat - s.x1);
                double e2 = std::abs(d.x2_hat - s.x2);
                double over = std::max(-v, v - m.d_max);
                x1.worst = std::max(x1.worst, e1);
                x2.worst = std::max(x2.worst, e2);
                amp.worst = std::max(amp.worst, std::max(over, 0.0));
                x1.passed = x1.passed && e1 <= x1_tol;
                x2.passed = x2.passed && e2 <= x2_tol;
                amp.passed = amp.passed && over <= 0.0;
                ++x1.samples;
                ++x2.samples;
                ++amp.samples;
            }
        }
        report.checks.push_back(x1);
        report.checks.push_back(x2);
        report.checks.push_back(amp);
    }

    {
        MappingConfig inner = make_config(1.0, 4, 1.0, QuantizerMode::Floor);
        MappingConfig outer = make_config(5.0, 5, 1.0, QuantizerMode::Floor);
        CheckResult c{"mapping3.roundtrip", true, 0.0, 0.0, 0};
        constexpr int grid = 20;
        for (int i = 0; i < grid; ++i) {
            for (int j = 0; j < grid; ++j) {
                for (int k = 0; k < grid; ++k) {
                    Volts x1 = inner.v1 * i / (grid - 1);
                    Volts x2 = inner.v2 * j / (grid - 1);
                    Volts x3 = outer.v2 * k / (grid - 1);
                    Decoded3 d = decode3(inner, outer, encode3(inner, outer, x1, x2, x3));
                    double e1 = std::abs(d.x1_hat - x1) / 1e-12;
                    double e2 = std::abs(d.x2_hat - x2) / inner.delta;
                    double e3 = std::abs(d.x3_hat - x3) / outer.delta;
                    // Worst is reported relative to each component's tolerance.
                    double rel = std::max({e1, e2, e3});
                    c.worst = std::max(c.worst, rel);
                    c.passed = c.passed && rel <= 1.0 + 1e-9;
                    ++c.samples;
                }
            }
        }
        c.tolerance = 1.0;
        report.checks.push_back(c);
    }

    {
        CircuitConfig circuit = prototype_circuit(cfg.quantizer);
        circuit.gain_error = cfg.circuit_gain_error;
        circuit.offset_error = cfg.circuit_offset_error;
        MappingConfig m = equivalent_mapping(circuit);
        CheckResult c{"circuit.equivalence", true, 0.0, 1e-9 * m.d_max, 0};
        constexpr int grid = 100;
        for (int i = 0; i < grid; ++i) {
            for (int j = 0; j < grid; ++j) {
                Volts vt = circuit.vt_max * i / (grid - 1);
                Volts vh = circuit.vh_max() * j / (grid - 1);
                Volts ideal = encode(m, {vt * circuit.v_r / circuit.vt_max, vh});
                double dev = std::abs(circuit_encode(circuit, vt, vh) - ideal);
                c.worst = std::max(c.worst, dev);
                c.passed = c.passed && dev <= c.tolerance;
                ++c.samples;
            }
        }
        report.checks.push_back(c);
    }

    {
        const Hertz bin = cfg.fm.sample_rate / static_cast<double>(cfg.rx.fft_size);
        CheckResult c{"chain.noiseless", true, 0.0, 0.5 * bin / cfg.fm.scale + 1e-12, 0};
        const std::size_t count = std::min<std::size_t>(trials, 100);
        std::vector<double> errs(count);
        parallel_for(count, cfg.workers, [&](std::size_t t) {
            std::mt19937_64 eng(derive_seed(cfg.master_seed, Stream::Source, t, 0xC4A1));
            Volts vd = uniform01(eng) * cfg.d_max;
            errs[t] = std::abs(transmit_receive(cfg.fm, ChannelSpec{}, cfg.rx, vd) - vd);
        });
        for (double e : errs) {
            c.worst = std::max(c.worst, e);
            c.passed = c.passed && e <= c.tolerance;
            ++c.samples;
        }
        report.checks.push_back(c);
    }
    return report;
}

std::string format_csv(const SweepResult& result) {
    const bool ext = result.extended();
    std::string out = "param,mean_mse,mean_sdr_db,mse_x1,mse_x2,trials";
    if (ext) out += ",median_sdr_db,csnr_est_db";
    out += '\n';
    for (const auto& r : result.rows) {
        out += format_number(r.param) + ',' + format_number(r.mean_mse) + ',' +
               format_number(r.mean_sdr_db) + ',' + format_number(r.mse_x1) + ',' +
               format_number(r.mse_x2) + ',' + std::to_string(r.trials);
        if (ext) {
            out += ',' + (r.median_sdr_db ? format_number(*r.median_sdr_db) : std::string()) + ',' +
                   (r.csnr_est_db ? format_number(*r.csnr_est_db) : std::string());
        }
        out += '\n';
    }
    return out;
}

void emit_csv(const SweepResult& result, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << format_csv(result);
    if (!f) throw IoError("write to '" + path + "' failed");
}

SweepResult parse_csv(std::string_view text) {
    SweepResult result;
    auto lines = split(text, '\n');
    if (lines.empty() || lines.front().rfind("param,mean_mse,mean_sdr_db,mse_x1,mse_x2,trials", 0) != 0) {
        throw IoError("missing or unexpected CSV header");
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto cols = split(lines[i], ',');
        if (cols.size() != 6 && cols.size() != 8) {
            throw IoError("CSV line " + std::to_string(i + 1) + " has " + std::to_string(cols.size()) + " columns");
        }
        SweepRow r;
        r.param = parse_double(cols[0]);
        r.mean_mse = parse_double(cols[1]);
        r.mean_sdr_db = parse_double(cols[2]);
        r.mse_x1 = parse_double(cols[3]);
        r.mse_x2 = parse_double(cols[4]);
        r.trials = static_cast<int>(parse_integer(cols[5]));
        if (cols.size() == 8) {
            if (!cols[6].empty()) r.median_sdr_db = parse_double(cols[6]);
            if (!cols[7].empty()) r.csnr_est_db = parse_double(cols[7]);
        }
        result.rows.push_back(r);
    }
    update_argmin(result);
    return result;
}

SweepResult read_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_csv(ss.str());
}

namespace {

nlohmann::json number_or_null(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

}  // namespace

std::string to_json(const std::vector<SweepResult>& results) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& res : results) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : res.rows) {
            nlohmann::json row = {{"param", number_or_null(r.param)},
                                  {"mean_mse", r.mean_mse},
                                  {"mean_sdr_db", r.mean_sdr_db},
                                  {"mse_x1", r.mse_x1},
                                  {"mse_x2", r.mse_x2},
                                  {"trials", r.trials}};
            if (r.median_sdr_db) row["median_sdr_db"] = *r.median_sdr_db;
            if (r.csnr_est_db) row["csnr_est_db"] = *r.csnr_est_db;
            rows.push_back(row);
        }
        doc.push_back({{"series", res.series},
                       {"best_param", number_or_null(res.best_param)},
                       {"best_mse", res.best_mse},
                       {"rows", rows}});
    }
    return doc.dump(2);
}

std::string to_json(const RoundTripReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"worst", c.worst},
                          {"tolerance", c.tolerance},
                          {"samples", c.samples}});
    }
    return nlohmann::json{{"passed", report.passed()}, {"checks", checks}}.dump(2);
}

std::vector<int> parse_int_list(std::string_view text) {
    std::vector<int> out;
    for (auto item : split(text, ',')) {
        if (item.empty()) continue;
        auto parts = split(item, ':');
        if (parts.size() == 1) {
            out.push_back(static_cast<int>(parse_integer(parts[0])));
        } else if (parts.size() == 2 || parts.size() == 3) {
            long long lo = parse_integer(parts[0]);
            long long hi = parse_integer(parts[1]);
            long long step = parts.size() == 3 ? parse_integer(parts[2]) : 1;
            if (step <= 0) throw ConfigError("range step must be positive");
            for (long long v = lo; v <= hi; v += step) out.push_back(static_cast<int>(v));
        } else {
            throw ConfigError("bad range '" + std::string(item) + "'");
        }
    }
    return out;
}

std::vector<double> parse_double_list(std::string_view text) {
    std::vector<double> out;
    for (auto item : split(text, ',')) {
        if (item.empty()) continue;
        auto parts = split(item, ':');
        if (parts.size() == 1) {
            out.push_back(parse_double(parts[0]));
        } else if (parts.size() == 3) {
            double lo = parse_double(parts[0]);
            double hi = parse_double(parts[1]);
            double step = parse_double(parts[2]);
            if (!(step > 0.0)) throw ConfigError("range step must be positive");
            auto n = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
            for (long long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
        } else {
            throw ConfigError("bad range '" + std::string(item) + "'");
        }
    }
    return out;
}

void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
    value = trim(value);
    auto as_int = [&] { return static_cast<int>(parse_integer(value)); };
    if (key == "kind") cfg.kind = parse_experiment_kind(value);
    else if (key == "distribution") {
        if (value == "uniform01") cfg.distribution = SourceDistribution::Uniform01;
        else if (value == "fixed") cfg.distribution = SourceDistribution::FixedPoint;
        else throw ConfigError("unknown distribution '" + std::string(value) + "' (uniform01|fixed)");
    }
    else if (key == "fixed_x1") cfg.fixed_x1 = parse_double(value);
    else if (key == "fixed_x2") cfg.fixed_x2 = parse_double(value);
    else if (key == "trials") cfg.trials = as_int();
    else if (key == "levels") cfg.levels = parse_int_list(value);
    else if (key == "snr_db") cfg.snr_db = parse_double_list(value);
    else if (key == "d_max") cfg.d_max = parse_double(value);
    else if (key == "v2") cfg.v2 = parse_double(value);
    else if (key == "num_levels") cfg.num_levels = as_int();
    else if (key == "quantizer") cfg.quantizer = parse_quantizer_mode(value);
    else if (key == "master_seed") cfg.master_seed = static_cast<std::uint64_t>(parse_integer(value));
    else if (key == "sensor_count") cfg.sensor_count = as_int();
    else if (key == "output") cfg.output_path = std::string(value);
    else if (key == "workers") cfg.workers = static_cast<unsigned>(std::max(1, as_int()));
    else if (key == "fm_scale") cfg.fm.scale = parse_double(value);
    else if (key == "amplitude") cfg.fm.amplitude = parse_double(value);
    else if (key == "sample_rate") cfg.fm.sample_rate = parse_double(value);
    else if (key == "record_seconds") cfg.fm.record_seconds = parse_double(value);
    else if (key == "fft_size") cfg.rx.fft_size = static_cast<std::size_t>(parse_integer(value));
    else if (key == "power_convention") {
        if (value == "unity") cfg.convention = PowerConvention::UnityPower;
        else if (value == "measured") cfg.convention = PowerConvention::MeasuredPower;
        else throw ConfigError("unknown power convention '" + std::string(value) + "' (unity|measured)");
    }
    else if (key == "guard_hz") cfg.guard = parse_double(value);
    else if (key == "antenna_mode") {
        if (value == "shared") cfg.antenna_mode = AntennaMode::Shared;
        else if (value == "dedicated") cfg.antenna_mode = AntennaMode::Dedicated;
        else if (value == "diversity") cfg.antenna_mode = AntennaMode::Diversity;
        else throw ConfigError("unknown antenna mode '" + std::string(value) + "'");
    }
    else if (key == "antennas") cfg.antennas = as_int();
    else if (key == "circuit_gain_error") cfg.circuit_gain_error = parse_double(value);
    else if (key == "circuit_offset_error") cfg.circuit_offset_error = parse_double(value);
    else if (key == "opamp_count") cfg.budget.opamp_count = as_int();
    else if (key == "comparator_count") cfg.budget.comparator_count = as_int();
    else if (key == "mux_count") cfg.budget.mux_count = as_int();
    else if (key == "opamp_power") cfg.budget.opamp_power = parse_double(value);
    else if (key == "comparator_power") cfg.budget.comparator_power = parse_double(value);
    else if (key == "mux_power") cfg.budget.mux_power = parse_double(value);
    else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

ExperimentConfig parse_experiment_config(std::string_view text) {
    ExperimentConfig cfg;
    int line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
        }
        set_config_value(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_experiment_config(ss.str());
}

}  // namespace ajscc
