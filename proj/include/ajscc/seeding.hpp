#pragma once

#include <cstdint>
#include <initializer_list>

namespace ajscc {

// Counter-based sub-seeds. A sub-seed depends only on the master seed and the
// coordinates of the work item (stream, sweep point, trial, antenna...), never
// on the order in which workers pick items up.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> coords) {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t c : coords) h = splitmix64(h ^ splitmix64(c + 0x632be59bd9b4e019ULL));
    return h;
}

// Stream tags keep source draws and channel noise independent.
enum class Stream : std::uint64_t { Source = 1, Noise = 2, Bootstrap = 3 };

constexpr std::uint64_t derive_seed(std::uint64_t master, Stream stream,
                                    std::uint64_t a = 0, std::uint64_t b = 0, std::uint64_t c = 0) {
    return derive_seed(master, {static_cast<std::uint64_t>(stream), a, b, c});
}

// Uniform double in [0, 1) from the top 53 bits; portable across standard libraries.
template <class Engine>
double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace ajscc
