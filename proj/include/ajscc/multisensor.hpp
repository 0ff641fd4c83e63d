#pragma once

// FDMA cluster: several sensors share one receiver, each on its own band.

#include <cstdint>
#include <vector>

#include "ajscc/mapping.hpp"
#include "ajscc/metrics.hpp"
#include "ajscc/signal_chain.hpp"

namespace ajscc {

struct SensorNode {
    int id = 0;
    MappingConfig mapping;
    FmConfig fm;
    SourceSample truth;
};

struct FdmaPlan {
    std::vector<Hertz> offsets;  // lowest frequency of each sensor's band
    Hertz band_width = 0.0;      // scale * d_max
    Hertz guard = 0.0;
};

/// Contiguous bands of width scale * d_max separated by `guard`, the first
/// starting at `guard`. Throws ConfigError when n * (width + guard) exceeds
/// Nyquist.
FdmaPlan assign_channels(int n, const FmConfig& fm, Volts d_max, Hertz guard = 1000.0);

/// Throws ConfigError if bands overlap, sit closer than the guard, or reach Nyquist.
void validate_plan(const FdmaPlan& plan, const FmConfig& fm);

enum class AntennaMode {
    Shared,     // one antenna, every sensor detected from it
    Dedicated,  // antenna i serves sensor i (noise level from sensor i's channel)
    Diversity,  // several antennas, spectra averaged before every peak search
};

struct ClusterOptions {
    AntennaMode mode = AntennaMode::Shared;
    int antennas = 1;  // used by Diversity; Shared uses 1, Dedicated one per sensor
    std::uint64_t master_seed = 0;
    std::uint64_t trial = 0;
};

struct ClusterCapture {
    std::vector<Waveform> antennas;
    std::vector<ChannelSpec> channels;  // per sensor
};

struct SensorResult {
    int id = 0;
    Volts v_true = 0.0;
    Volts v_hat = 0.0;
    DecodedPair decoded;
    PeakResult peak;
    double csnr_db = 0.0;  // estimated over the sensor's band
};

/// Element-wise mean of power spectra (noncoherent combining).
PowerSpectrum diversity_combine(const std::vector<PowerSpectrum>& spectra);

/// Builds the antenna captures: every antenna receives the sum of all
/// sensors' tones (gain and phase from that sensor's channel) plus its own
/// noise, seeded from (master_seed, trial, antenna).
ClusterCapture capture_cluster(const std::vector<SensorNode>& sensors, const FdmaPlan& plan,
                               const std::vector<ChannelSpec>& channels, const ClusterOptions& opts);

/// Runs the capture and, per sensor, searches only that sensor's band,
/// removes its offset, and decodes. Results are in the order of `sensors`.
std::vector<SensorResult> simulate_cluster(const std::vector<SensorNode>& sensors,
                                           const FdmaPlan& plan,
                                           const std::vector<ChannelSpec>& channels,
                                           const ReceiverConfig& rx,
                                           const ClusterOptions& opts = {});

}  // namespace ajscc
