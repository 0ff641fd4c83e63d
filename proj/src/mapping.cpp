#include "ajscc/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ajscc/errors.hpp"

namespace ajscc {

namespace {

// Ratios within this relative distance below an integer are treated as that
// integer, so a voltage sitting exactly on a fold is not pushed onto the
// previous line by division round-off.
constexpr double kBoundarySnap = 1e-12;

bool is_even(int k) { return (k % 2) == 0; }

int snapped_floor(double ratio) {
    double k = std::floor(ratio);
    if (ratio - k > 1.0 - kBoundarySnap * std::max(1.0, std::abs(ratio))) k += 1.0;
    return static_cast<int>(k);
}

void check_in_range(double value, double hi, const char* name) {
    if (!std::isfinite(value) || value < 0.0 || value > hi) {
        throw RangeError(std::string(name) + "=" + std::to_string(value) +
                         " outside [0, " + std::to_string(hi) + "]");
    }
}

}  // namespace

std::string_view to_string(QuantizerMode mode) {
    switch (mode) {
        case QuantizerMode::Floor: return "floor";
        case QuantizerMode::NearestLine: return "nearest";
    }
    return "floor";
}

QuantizerMode parse_quantizer_mode(std::string_view text) {
    if (text == "floor") return QuantizerMode::Floor;
    if (text == "nearest") return QuantizerMode::NearestLine;
    throw ConfigError("unknown quantizer mode '" + std::string(text) + "' (floor|nearest)");
}

MappingConfig make_config(Volts d_max, int num_levels, Volts v2, QuantizerMode mode) {
    if (!std::isfinite(d_max) || d_max <= 0.0) throw ConfigError("d_max must be positive");
    if (!std::isfinite(v2) || v2 <= 0.0) throw ConfigError("v2 must be positive");
    if (num_levels < 2) throw ConfigError("num_levels must be at least 2");

    MappingConfig cfg;
    cfg.d_max = d_max;
    cfg.num_levels = num_levels;
    cfg.v2 = v2;
    cfg.v1 = d_max / num_levels;
    cfg.delta = v2 / (num_levels - 1);
    cfg.quantizer_mode = mode;
    return cfg;
}

int quantize_level(const MappingConfig& cfg, Volts x2) {
    check_in_range(x2, cfg.v2, "x2");
    double ratio = x2 / cfg.delta;
    double k = cfg.quantizer_mode == QuantizerMode::Floor ? std::floor(ratio)
                                                                 : std::round(ratio);
    return std::clamp(static_cast<int>(k), 0, cfg.num_levels - 1);
}

Volts encode(const MappingConfig& cfg, const SourceSample& s) {
    check_in_range(s.x1, cfg.v1, "x1");
    int k = quantize_level(cfg, s.x2);
    double base = k * cfg.v1;
    return is_even(k) ? base + s.x1 : base + cfg.v1 - s.x1;
}

DecodedPair decode(const MappingConfig& cfg, Volts v) {
    if (!std::isfinite(v)) throw RangeError("received voltage is not finite");
    v = std::clamp(v, 0.0, cfg.d_max);

    int k = std::clamp(snapped_floor(v / cfg.v1), 0, cfg.num_levels - 1);
    double r = std::clamp(v - k * cfg.v1, 0.0, cfg.v1);

    DecodedPair out;
    out.level_index = k;
    out.x1_hat = is_even(k) ? r : cfg.v1 - r;
    out.x2_hat = k * cfg.delta;
    return out;
}

namespace {

void check_nesting(const MappingConfig& inner, const MappingConfig& outer) {
    double tol = 1e-12 * std::max(inner.d_max, outer.v1);
    if (std::abs(outer.v1 - inner.d_max) > tol) {
        throw ConfigError("outer.v1 (" + std::to_string(outer.v1) +
                          ") must equal inner.d_max (" + std::to_string(inner.d_max) + ")");
    }
}

}  // namespace

Volts encode3(const MappingConfig& inner, const MappingConfig& outer,
              Volts x1, Volts x2, Volts x3) {
    check_nesting(inner, outer);
    Volts inner_v = encode(inner, {x1, x2});
    // inner_v can exceed outer.v1 by round-off when the two differ in the last ulp.
    return encode(outer, {std::min(inner_v, outer.v1), x3});
}

Decoded3 decode3(const MappingConfig& inner, const MappingConfig& outer, Volts v) {
    check_nesting(inner, outer);
    DecodedPair o = decode(outer, v);
    DecodedPair i = decode(inner, o.x1_hat);
    return {i.x1_hat, i.x2_hat, o.x2_hat};
}

}  // namespace ajscc
