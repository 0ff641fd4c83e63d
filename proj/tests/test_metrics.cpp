#include <doctest.h>

#include <cmath>

#include "ajscc/errors.hpp"
#include "ajscc/metrics.hpp"
#include "ajscc/signal_chain.hpp"

using namespace ajscc;

TEST_CASE("mse") {
    CHECK(mse({0.3, 0.5}, {0.3, 0.5, 0}) == 0.0);
    CHECK(mse({0.3, 0.5}, {0.29, 0.48, 0}) == doctest::Approx(5e-4));
    // Which component carries the error does not matter.
    CHECK(mse({0.3, 0.5}, {0.32, 0.5, 0}) == doctest::Approx(mse({0.3, 0.5}, {0.3, 0.52, 0})));
}

TEST_CASE("normalized_report") {
    auto r = normalized_report({0.05, 0.5}, {0.04, 0.6, 0}, 0.1, 1.0);
    CHECK(r.mse_x1 == doctest::Approx(0.01));
    CHECK(r.mse_x2 == doctest::Approx(0.01));
    CHECK(r.mse == doctest::Approx(0.02));
    CHECK(r.sdr_db == doctest::Approx(-10.0 * std::log10(0.02)));
    CHECK_THROWS_AS(normalized_report({0, 0}, {0, 0, 0}, 0.0, 1.0), ConfigError);
}

TEST_CASE("sdr") {
    CHECK(sdr(1e-3) == doctest::Approx(30.0));
    CHECK(sdr(1.0) == doctest::Approx(0.0));
    CHECK(sdr(3e-4) == doctest::Approx(35.2288).epsilon(1e-5));
    CHECK(sdr(0.0) == kSdrCapDb);
    CHECK(sdr(mse({0.1, 0.2}, {0.1, 0.2, 0})) == kSdrCapDb);
    CHECK_THROWS_AS(sdr(-1.0), RangeError);
    CHECK_THROWS_AS(sdr(NAN), RangeError);
}

TEST_CASE("property: sdr is strictly decreasing in mse") {
    double prev = sdr(1e-15);
    for (int i = 1; i <= 1800; ++i) {
        double m = std::pow(10.0, -15.0 + i * 0.01);
        double s = sdr(m);
        REQUIRE(s < prev);
        prev = s;
    }
}

namespace {

PowerSpectrum noisy_spectrum(double amplitude, double freq, double snr_db, std::uint64_t seed) {
    FmConfig fm;
    Waveform wf{synthesize_tone(amplitude, freq, 0.0, fm.sample_rate, fm.num_samples()), fm.sample_rate};
    add_awgn(wf, noise_variance(snr_db), seed);
    return compute_spectrum(ReceiverConfig{}, wf);
}

double csnr_of(const PowerSpectrum& s) {
    auto peak = find_peak(s, 0, s.power.size() - 1);
    return estimate_csnr(s.power, peak.bin);
}

}  // namespace

TEST_CASE("estimate_csnr for a clean tone is large") {
    CHECK(csnr_of(noisy_spectrum(1.0, 1234.37, INFINITY, 0)) > 40.0);
    CHECK(csnr_of(noisy_spectrum(1.0, 1234.0, INFINITY, 0)) > 100.0);
    CHECK_THROWS_AS(estimate_csnr({}, 0), SignalError);
    std::vector<double> p{1.0, 2.0};
    CHECK_THROWS_AS(estimate_csnr(p, 5), RangeError);
}

TEST_CASE("estimate_csnr for white noise matches the order-statistics oracle") {
    // Noise-only bins are exponential. The expected maximum of M of them is
    // H_M times the mean, the median ln 2 times the mean, so the estimator
    // centres on 10 log10(H_M / (M ln 2)).
    const double m = 32769.0;
    double harmonic = 0.0;
    for (int k = 1; k <= 32769; ++k) harmonic += 1.0 / k;
    const double expect = 10.0 * std::log10(harmonic / (m * std::log(2.0)));

    double sum = 0.0;
    const int runs = 40;
    for (int t = 0; t < runs; ++t) {
        double c = csnr_of(noisy_spectrum(0.0, 0.0, 0.0, 500 + t));
        CHECK(c < -25.0);
        sum += c;
    }
    CHECK(sum / runs == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("estimate_csnr tracks the configured SNR for a bin-centred tone") {
    // Peak (N/2)^2 over median (ln 2) N sigma^2 times N/2 bins gives
    // 1 / (2 ln 2 sigma^2): 1.42 dB below the unity-power SNR.
    for (double snr : {-25.0, -20.0, -10.0}) {
        double c = csnr_of(noisy_spectrum(1.0, 3000.0, snr, 9));
        CHECK(c == doctest::Approx(snr - 10.0 * std::log10(2.0 * std::log(2.0))).epsilon(0.03));
    }
}

TEST_CASE("estimate_csnr is deterministic for a fixed seed") {
    CHECK(csnr_of(noisy_spectrum(1.0, 777.3, -15.0, 42)) == csnr_of(noisy_spectrum(1.0, 777.3, -15.0, 42)));
}
