#include "ajscc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ajscc/errors.hpp"

namespace ajscc {

double mse(const SourceSample& truth, const DecodedPair& est) {
    double e1 = truth.x1 - est.x1_hat;
    double e2 = truth.x2 - est.x2_hat;
    return e1 * e1 + e2 * e2;
}

MetricsReport normalized_report(const SourceSample& truth, const DecodedPair& est,
                                Volts x1_range, Volts x2_range) {
    if (!(x1_range > 0.0) || !(x2_range > 0.0)) throw ConfigError("source ranges must be positive");
    MetricsReport r;
    double e1 = (truth.x1 - est.x1_hat) / x1_range;
    double e2 = (truth.x2 - est.x2_hat) / x2_range;
    r.mse_x1 = e1 * e1;
    r.mse_x2 = e2 * e2;
    r.mse = r.mse_x1 + r.mse_x2;
    r.sdr_db = sdr(r.mse);
    return r;
}

double sdr(double mse) {
    if (std::isnan(mse) || mse < 0.0) throw RangeError("mse must be non-negative");
    if (mse == 0.0) return kSdrCapDb;
    return std::min(kSdrCapDb, -10.0 * std::log10(mse));
}

double estimate_csnr(std::span<const double> power_spectrum, std::size_t peak_bin) {
    if (power_spectrum.empty()) throw SignalError("empty spectrum");
    if (peak_bin >= power_spectrum.size()) throw RangeError("peak bin outside spectrum");

    std::vector<double> sorted(power_spectrum.begin(), power_spectrum.end());
    auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    double median = *mid;
    double peak = power_spectrum[peak_bin];
    if (peak <= 0.0) throw SignalError("peak bin carries no power");
    if (median <= 0.0) return kSdrCapDb;
    return std::min(kSdrCapDb, 10.0 * std::log10(peak / (median * static_cast<double>(sorted.size()))));
}

}  // namespace ajscc
