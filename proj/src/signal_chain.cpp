#include "ajscc/signal_chain.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>

#include "ajscc/errors.hpp"
#include "fft.hpp"

namespace ajscc {

namespace {

void check_waveform(const Waveform& wf) {
    if (wf.samples.empty()) throw SignalError("waveform is empty");
    if (!(wf.sample_rate > 0.0)) throw SignalError("waveform sample rate must be positive");
    for (double s : wf.samples) {
        if (!std::isfinite(s)) throw SignalError("waveform contains non-finite samples");
    }
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::vector<double> rotate_phase(const std::vector<double>& x, double phase) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> buf(x.begin(), x.end());
    auto spec = fft::forward(buf);
    // One-sided spectrum of the analytic signal.
    for (std::size_t k = 1; k < n; ++k) {
        if (2 * k < n) spec[k] *= 2.0;
        else if (2 * k > n) spec[k] = 0.0;
    }
    auto z = fft::backward(spec);
    const std::complex<double> rot = std::polar(1.0, phase) / static_cast<double>(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = (z[i] * rot).real();
    return y;
}

}  // namespace

std::size_t FmConfig::num_samples() const {
    return static_cast<std::size_t>(std::llround(record_seconds * sample_rate));
}

void validate(const FmConfig& fm, Volts d_max) {
    if (!(fm.scale > 0.0)) throw ConfigError("FM scale must be positive");
    if (!(fm.sample_rate > 0.0)) throw ConfigError("sample rate must be positive");
    if (!(fm.record_seconds > 0.0)) throw ConfigError("record length must be positive");
    double n = fm.record_seconds * fm.sample_rate;
    if (std::abs(n - std::round(n)) > 1e-9 * n) {
        throw ConfigError("record_seconds * sample_rate must be a whole number of samples");
    }
    if (fm.scale * d_max > fm.nyquist()) {
        throw ConfigError("scale * d_max = " + std::to_string(fm.scale * d_max) +
                          " Hz exceeds Nyquist " + std::to_string(fm.nyquist()) + " Hz");
    }
}

double noise_variance(double snr_db, double signal_power) {
    if (std::isinf(snr_db) && snr_db > 0) return 0.0;
    return signal_power / std::pow(10.0, snr_db / 10.0);
}

std::vector<double> synthesize_tone(double amplitude, Hertz frequency, double phase,
                                    Hertz sample_rate, std::size_t count) {
    std::vector<double> out(count);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t n = 0; n < count; ++n) {
        // Reduce the cycle count before scaling by 2 pi to keep the argument small.
        double cycles = std::fmod(frequency * static_cast<double>(n), sample_rate) / sample_rate;
        out[n] = amplitude * std::cos(two_pi * cycles + phase);
    }
    return out;
}

Waveform fm_modulate(const FmConfig& fm, Volts vd, Hertz carrier_offset) {
    if (!std::isfinite(vd) || vd < 0.0) throw RangeError("vd must be a non-negative voltage");
    Hertz f = carrier_offset + fm.scale * vd;
    if (f >= fm.nyquist()) {
        throw RangeError("tone at " + std::to_string(f) + " Hz violates Nyquist");
    }
    return {synthesize_tone(fm.amplitude, f, 0.0, fm.sample_rate, fm.num_samples()), fm.sample_rate};
}

void add_awgn(Waveform& wf, double variance, std::uint64_t seed) {
    if (variance <= 0.0) return;
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> noise(0.0, std::sqrt(variance));
    for (double& s : wf.samples) s += noise(eng);
}

Waveform apply_channel(const ChannelSpec& ch, const Waveform& wf) {
    check_waveform(wf);
    if (!(ch.gain > 0.0)) throw ConfigError("channel gain must be positive");

    Waveform out{ch.phase == 0.0 ? wf.samples : rotate_phase(wf.samples, ch.phase), wf.sample_rate};
    for (double& s : out.samples) s *= ch.gain;

    double power = 1.0;
    if (ch.convention == PowerConvention::MeasuredPower) {
        double acc = 0.0;
        for (double s : out.samples) acc += s * s;
        power = acc / static_cast<double>(out.samples.size());
    }
    add_awgn(out, noise_variance(ch.snr_db, power), ch.rng_seed);
    return out;
}

PowerSpectrum compute_spectrum(const ReceiverConfig& rx, const Waveform& wf) {
    check_waveform(wf);
    if (!is_power_of_two(rx.fft_size)) throw ConfigError("fft_size must be a power of two");
    if (wf.samples.size() < rx.fft_size) {
        throw SignalError("waveform has " + std::to_string(wf.samples.size()) +
                          " samples, fewer than fft_size " + std::to_string(rx.fft_size));
    }
    std::span<const double> window(wf.samples.data(), rx.fft_size);
    return {fft::power_spectrum(window), wf.sample_rate / static_cast<double>(rx.fft_size)};
}

PeakResult find_peak(const PowerSpectrum& spectrum, std::size_t lo_bin, std::size_t hi_bin) {
    if (spectrum.power.empty()) throw SignalError("empty spectrum");
    hi_bin = std::min(hi_bin, spectrum.power.size() - 1);
    if (lo_bin > hi_bin) throw RangeError("empty bin range");

    auto first = spectrum.power.begin() + static_cast<std::ptrdiff_t>(lo_bin);
    auto last = spectrum.power.begin() + static_cast<std::ptrdiff_t>(hi_bin) + 1;
    auto it = std::max_element(first, last);
    if (*it <= 0.0) throw SignalError("no signal energy in the searched band");

    PeakResult peak;
    peak.bin = static_cast<std::size_t>(it - spectrum.power.begin());
    peak.frequency = static_cast<double>(peak.bin) * spectrum.bin_width;
    peak.power = *it;
    peak.at_dc = peak.bin == 0;
    return peak;
}

PeakResult detect_peak(const ReceiverConfig& rx, const Waveform& wf) {
    auto spectrum = compute_spectrum(rx, wf);
    return find_peak(spectrum, 0, spectrum.power.size() - 1);
}

Volts freq_to_voltage(const FmConfig& fm, Hertz f) { return f / fm.scale; }

ChainResult transmit_receive_detail(const FmConfig& fm, const ChannelSpec& ch,
                                    const ReceiverConfig& rx, Volts vd) {
    auto rx_wave = apply_channel(ch, fm_modulate(fm, vd));
    auto peak = detect_peak(rx, rx_wave);
    return {freq_to_voltage(fm, peak.frequency), peak};
}

Volts transmit_receive(const FmConfig& fm, const ChannelSpec& ch, const ReceiverConfig& rx, Volts vd) {
    return transmit_receive_detail(fm, ch, rx, vd).v_hat;
}

}  // namespace ajscc
