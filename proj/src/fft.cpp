#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace ajscc::fft {

namespace {

enum class Kind { RealForward, ComplexForward, ComplexBackward };

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

FftwBuffer<double> alloc_real(std::size_t n) {
    return FftwBuffer<double>(fftw_alloc_real(n));
}

FftwBuffer<fftw_complex> alloc_complex(std::size_t n) {
    return FftwBuffer<fftw_complex>(fftw_alloc_complex(n));
}

// FFTW_ESTIMATE picks the algorithm without timing runs, so the same input
// always yields bit-identical output across processes.
fftw_plan plan_for(Kind kind, int n) {
    static std::mutex mutex;
    static std::map<std::pair<Kind, int>, fftw_plan> cache;
    std::lock_guard lock(mutex);
    auto key = std::make_pair(kind, n);
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    fftw_plan plan = nullptr;
    auto cin = alloc_complex(n);
    auto cout = alloc_complex(n);
    switch (kind) {
        case Kind::RealForward: {
            auto rin = alloc_real(n);
            plan = fftw_plan_dft_r2c_1d(n, rin.get(), cout.get(), FFTW_ESTIMATE);
            break;
        }
        case Kind::ComplexForward:
            plan = fftw_plan_dft_1d(n, cin.get(), cout.get(), FFTW_FORWARD, FFTW_ESTIMATE);
            break;
        case Kind::ComplexBackward:
            plan = fftw_plan_dft_1d(n, cin.get(), cout.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
            break;
    }
    cache.emplace(key, plan);
    return plan;
}

std::vector<std::complex<double>> complex_dft(std::span<const std::complex<double>> in, Kind kind) {
    const auto n = in.size();
    auto a = alloc_complex(n);
    auto b = alloc_complex(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i][0] = in[i].real();
        a[i][1] = in[i].imag();
    }
    fftw_execute_dft(plan_for(kind, static_cast<int>(n)), a.get(), b.get());
    std::vector<std::complex<double>> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = {b[i][0], b[i][1]};
    return out;
}

}  // namespace

std::vector<double> power_spectrum(std::span<const double> samples) {
    const auto n = samples.size();
    const auto bins = n / 2 + 1;
    auto in = alloc_real(n);
    auto out = alloc_complex(bins);
    std::copy(samples.begin(), samples.end(), in.get());
    fftw_execute_dft_r2c(plan_for(Kind::RealForward, static_cast<int>(n)), in.get(), out.get());

    std::vector<double> power(bins);
    for (std::size_t k = 0; k < bins; ++k) power[k] = out[k][0] * out[k][0] + out[k][1] * out[k][1];
    return power;
}

std::vector<std::complex<double>> forward(std::span<const std::complex<double>> in) {
    return complex_dft(in, Kind::ComplexForward);
}

std::vector<std::complex<double>> backward(std::span<const std::complex<double>> in) {
    return complex_dft(in, Kind::ComplexBackward);
}

}  // namespace ajscc::fft
