#pragma once

// Baseband transmit/receive chain: the encoded voltage sets the frequency of
// a unit cosine, a static channel scales and phase-shifts it and adds white
// Gaussian noise, and the receiver takes the FFT peak and maps it back to a
// voltage.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "ajscc/mapping.hpp"

namespace ajscc {

using Hertz = double;

struct FmConfig {
    double scale = 1000.0;  // Hz per volt
    double amplitude = 1.0;
    Hertz sample_rate = 65536.0;
    double record_seconds = 1.0;

    std::size_t num_samples() const;
    Hertz nyquist() const { return sample_rate / 2.0; }
};

/// Throws ConfigError unless the record is a whole number of samples and
/// scale * d_max stays at or below Nyquist.
void validate(const FmConfig& fm, Volts d_max);

struct Waveform {
    std::vector<double> samples;
    Hertz sample_rate = 0.0;
};

enum class PowerConvention {
    UnityPower,     // transmitted power taken as 1 regardless of amplitude
    MeasuredPower,  // mean square of the received (scaled) signal
};

struct ChannelSpec {
    double snr_db = std::numeric_limits<double>::infinity();  // +inf: no noise
    double gain = 1.0;
    double phase = 0.0;  // radians
    std::uint64_t rng_seed = 0;
    PowerConvention convention = PowerConvention::UnityPower;
};

/// sigma^2 = P / 10^(snr_db / 10); zero for snr_db = +inf.
double noise_variance(double snr_db, double signal_power = 1.0);

enum class Window { Rectangular };

struct ReceiverConfig {
    std::size_t fft_size = 65536;
    Window window = Window::Rectangular;
};

struct PowerSpectrum {
    std::vector<double> power;  // |X[k]|^2, k = 0 .. fft_size / 2
    Hertz bin_width = 0.0;
};

struct PeakResult {
    std::size_t bin = 0;
    Hertz frequency = 0.0;
    double power = 0.0;
    bool at_dc = false;  // DC and the noise floor cannot be told apart
};

// amplitude * cos(2 pi f n / fs + phase), n = 0 .. count - 1
std::vector<double> synthesize_tone(double amplitude, Hertz frequency, double phase,
                                    Hertz sample_rate, std::size_t count);

/// Unit tone at carrier_offset + scale * vd. Throws RangeError for negative
/// vd or a frequency at/above Nyquist.
Waveform fm_modulate(const FmConfig& fm, Volts vd, Hertz carrier_offset = 0.0);

/// Adds N(0, variance) samples drawn from a generator seeded with `seed`.
void add_awgn(Waveform& wf, double variance, std::uint64_t seed);

/// gain * (phase-rotated input) + AWGN. The phase rotation uses the analytic
/// signal, which is exact for tones periodic in the record.
Waveform apply_channel(const ChannelSpec& ch, const Waveform& wf);

PowerSpectrum compute_spectrum(const ReceiverConfig& rx, const Waveform& wf);

/// Largest bin in [lo_bin, hi_bin]. Throws SignalError for an all-zero range.
PeakResult find_peak(const PowerSpectrum& spectrum, std::size_t lo_bin, std::size_t hi_bin);

/// Peak over [0, fs/2].
PeakResult detect_peak(const ReceiverConfig& rx, const Waveform& wf);

Volts freq_to_voltage(const FmConfig& fm, Hertz f);

struct ChainResult {
    Volts v_hat = 0.0;
    PeakResult peak;
};

ChainResult transmit_receive_detail(const FmConfig& fm, const ChannelSpec& ch,
                                    const ReceiverConfig& rx, Volts vd);

Volts transmit_receive(const FmConfig& fm, const ChannelSpec& ch, const ReceiverConfig& rx, Volts vd);

}  // namespace ajscc
