#include "ajscc/multisensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ajscc/errors.hpp"
#include "ajscc/seeding.hpp"

namespace ajscc {

namespace {

struct Band {
    Hertz lo = 0.0;
    Hertz hi = 0.0;
};

Band sensor_band(const SensorNode& s, Hertz offset) {
    return {offset, offset + s.fm.scale * s.mapping.d_max};
}

void check_bands(std::vector<Band> bands, Hertz guard, Hertz nyquist) {
    std::sort(bands.begin(), bands.end(), [](const Band& a, const Band& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < bands.size(); ++i) {
        if (bands[i].lo < 0.0) throw ConfigError("band offset must be non-negative");
        if (bands[i].hi >= nyquist) {
            throw ConfigError("band ending at " + std::to_string(bands[i].hi) + " Hz reaches Nyquist");
        }
        if (i > 0 && bands[i].lo - bands[i - 1].hi < guard) {
            throw ConfigError("bands at " + std::to_string(bands[i - 1].lo) + " Hz and " +
                              std::to_string(bands[i].lo) + " Hz overlap or violate the guard");
        }
    }
}

void check_cluster(const std::vector<SensorNode>& sensors, const FdmaPlan& plan,
                   const std::vector<ChannelSpec>& channels) {
    if (sensors.empty()) throw ConfigError("cluster needs at least one sensor");
    if (plan.offsets.size() != sensors.size()) throw ConfigError("plan and sensor counts differ");
    if (channels.size() != sensors.size()) throw ConfigError("need one channel per sensor");
    const FmConfig& ref = sensors.front().fm;
    std::vector<Band> bands;
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        const FmConfig& fm = sensors[i].fm;
        if (fm.sample_rate != ref.sample_rate || fm.num_samples() != ref.num_samples()) {
            throw ConfigError("all sensors must share sample rate and record length");
        }
        bands.push_back(sensor_band(sensors[i], plan.offsets[i]));
    }
    check_bands(bands, plan.guard, ref.nyquist());
}

int antenna_count(const ClusterOptions& opts, std::size_t sensors) {
    switch (opts.mode) {
        case AntennaMode::Shared: return 1;
        case AntennaMode::Dedicated: return static_cast<int>(sensors);
        case AntennaMode::Diversity:
            if (opts.antennas < 1) throw ConfigError("diversity needs at least one antenna");
            return opts.antennas;
    }
    return 1;
}

// Which channel's SNR sets the noise floor of an antenna.
const ChannelSpec& noise_source(const ClusterOptions& opts, const std::vector<ChannelSpec>& channels,
                                int antenna) {
    if (opts.mode == AntennaMode::Dedicated) return channels[static_cast<std::size_t>(antenna)];
    for (const auto& ch : channels) {
        if (ch.snr_db != channels.front().snr_db || ch.convention != channels.front().convention) {
            throw ConfigError("shared antennas need one noise level across sensor channels");
        }
    }
    return channels.front();
}

}  // namespace

FdmaPlan assign_channels(int n, const FmConfig& fm, Volts d_max, Hertz guard) {
    if (n < 1) throw ConfigError("need at least one sensor");
    if (guard < 0.0) throw ConfigError("guard must be non-negative");
    FdmaPlan plan;
    plan.band_width = fm.scale * d_max;
    plan.guard = guard;
    double stride = plan.band_width + guard;
    if (n * stride > fm.nyquist()) {
        throw ConfigError(std::to_string(n) + " bands of " + std::to_string(stride) +
                          " Hz exceed Nyquist " + std::to_string(fm.nyquist()) + " Hz");
    }
    for (int i = 0; i < n; ++i) plan.offsets.push_back(guard + i * stride);
    return plan;
}

void validate_plan(const FdmaPlan& plan, const FmConfig& fm) {
    std::vector<Band> bands;
    for (Hertz off : plan.offsets) bands.push_back({off, off + plan.band_width});
    check_bands(bands, plan.guard, fm.nyquist());
}

PowerSpectrum diversity_combine(const std::vector<PowerSpectrum>& spectra) {
    if (spectra.empty()) throw ConfigError("nothing to combine");
    PowerSpectrum out = spectra.front();
    if (spectra.size() == 1) return out;
    for (std::size_t s = 1; s < spectra.size(); ++s) {
        if (spectra[s].power.size() != out.power.size()) throw ConfigError("spectrum lengths differ");
        for (std::size_t k = 0; k < out.power.size(); ++k) out.power[k] += spectra[s].power[k];
    }
    for (double& p : out.power) p /= static_cast<double>(spectra.size());
    return out;
}

ClusterCapture capture_cluster(const std::vector<SensorNode>& sensors, const FdmaPlan& plan,
                               const std::vector<ChannelSpec>& channels, const ClusterOptions& opts) {
    check_cluster(sensors, plan, channels);
    const FmConfig& ref = sensors.front().fm;
    const std::size_t n = ref.num_samples();

    // Summing in band order makes the capture independent of sensor ordering.
    std::vector<std::size_t> order(sensors.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return plan.offsets[a] < plan.offsets[b]; });

    std::vector<double> clean(n, 0.0);
    for (std::size_t i : order) {
        const SensorNode& s = sensors[i];
        Volts vd = encode(s.mapping, s.truth);
        Hertz f = plan.offsets[i] + s.fm.scale * vd;
        auto tone = synthesize_tone(s.fm.amplitude * channels[i].gain, f, channels[i].phase,
                                    ref.sample_rate, n);
        for (std::size_t k = 0; k < n; ++k) clean[k] += tone[k];
    }

    ClusterCapture cap;
    cap.channels = channels;
    int count = antenna_count(opts, sensors.size());
    for (int a = 0; a < count; ++a) {
        const ChannelSpec& src = noise_source(opts, channels, a);
        double power = 1.0;
        if (src.convention == PowerConvention::MeasuredPower) {
            double acc = 0.0;
            for (double v : clean) acc += v * v;
            power = acc / static_cast<double>(n);
        }
        Waveform wf{clean, ref.sample_rate};
        add_awgn(wf, noise_variance(src.snr_db, power),
                 derive_seed(opts.master_seed, Stream::Noise, opts.trial, static_cast<std::uint64_t>(a)));
        cap.antennas.push_back(std::move(wf));
    }
    return cap;
}

std::vector<SensorResult> simulate_cluster(const std::vector<SensorNode>& sensors,
                                           const FdmaPlan& plan,
                                           const std::vector<ChannelSpec>& channels,
                                           const ReceiverConfig& rx, const ClusterOptions& opts) {
    ClusterCapture cap = capture_cluster(sensors, plan, channels, opts);

    std::vector<PowerSpectrum> spectra;
    for (const auto& wf : cap.antennas) spectra.push_back(compute_spectrum(rx, wf));
    PowerSpectrum combined;
    if (opts.mode != AntennaMode::Dedicated) combined = diversity_combine(spectra);

    std::vector<SensorResult> results;
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        const SensorNode& s = sensors[i];
        const PowerSpectrum& spec = opts.mode == AntennaMode::Dedicated ? spectra[i] : combined;
        Band band = sensor_band(s, plan.offsets[i]);
        auto lo = static_cast<std::size_t>(std::ceil(band.lo / spec.bin_width));
        auto hi = static_cast<std::size_t>(std::floor(band.hi / spec.bin_width));

        SensorResult r;
        r.id = s.id;
        r.v_true = encode(s.mapping, s.truth);
        r.peak = find_peak(spec, lo, hi);
        r.v_hat = freq_to_voltage(s.fm, r.peak.frequency - plan.offsets[i]);
        r.decoded = decode(s.mapping, r.v_hat);
        r.csnr_db = estimate_csnr(spec.power, r.peak.bin);
        results.push_back(r);
    }
    return results;
}

}  // namespace ajscc
