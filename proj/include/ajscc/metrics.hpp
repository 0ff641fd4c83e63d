#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "ajscc/mapping.hpp"

namespace ajscc {

// SDR reported for a perfect reconstruction, and the ceiling for any SDR.
inline constexpr double kSdrCapDb = 200.0;

struct MetricsReport {
    double mse = 0.0;     // mse_x1 + mse_x2
    double mse_x1 = 0.0;
    double mse_x2 = 0.0;
    double sdr_db = kSdrCapDb;
    std::optional<double> csnr_db;
};

/// (x1 - x1_hat)^2 + (x2 - x2_hat)^2 in the units of the inputs.
double mse(const SourceSample& truth, const DecodedPair& est);

/// Same, with both components divided by their full range so the error is
/// measured on the unit square.
MetricsReport normalized_report(const SourceSample& truth, const DecodedPair& est,
                                Volts x1_range, Volts x2_range);

/// 10 log10(1 / mse), capped at kSdrCapDb (so mse = 0 maps to the cap).
double sdr(double mse);

/// 10 log10(peak / (median * bins)) over a power spectrum. A heuristic
/// baseband CSNR: for a bin-centred unit tone under unity-power AWGN it reads
/// about 1.4 dB below the configured SNR, for noise alone far below 0 dB.
double estimate_csnr(std::span<const double> power_spectrum, std::size_t peak_bin);

}  // namespace ajscc
