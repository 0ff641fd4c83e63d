#pragma once

// Rectangular Shannon mapping: two analog sources folded onto a single
// voltage by laying L parallel lines across the (x1, x2) square and
// transmitting the curve length from the origin to the mapped point.

#include <string_view>

namespace ajscc {

using Volts = double;

enum class QuantizerMode {
    Floor,  // k = floor(x2 / delta)
    NearestLine,  // k = round(x2 / delta), the closest line
};

std::string_view to_string(QuantizerMode mode);
QuantizerMode parse_quantizer_mode(std::string_view text);

struct MappingConfig {
    Volts d_max = 0.0;   // amplitude constraint on the encoded voltage
    int num_levels = 0;  // L
    Volts v2 = 0.0;      // full range of the quantized source x2
    Volts v1 = 0.0;      // per-level span of x1, d_max / L
    Volts delta = 0.0;   // line spacing, v2 / (L - 1)
    QuantizerMode quantizer_mode = QuantizerMode::Floor;
};

struct SourceSample {
    Volts x1 = 0.0;  // continuous source, [0, v1]
    Volts x2 = 0.0;  // quantized source, [0, v2]
};

struct DecodedPair {
    Volts x1_hat = 0.0;
    Volts x2_hat = 0.0;
    int level_index = 0;
};

struct Decoded3 {
    Volts x1_hat = 0.0;
    Volts x2_hat = 0.0;
    Volts x3_hat = 0.0;
};

/// Builds a config with v1 and delta derived. Throws ConfigError for
/// num_levels < 2 or non-positive / non-finite ranges.
MappingConfig make_config(Volts d_max, int num_levels, Volts v2,
                          QuantizerMode mode = QuantizerMode::Floor);

/// Line index for x2, clamped to [0, L-1]. Throws RangeError outside [0, v2].
int quantize_level(const MappingConfig& cfg, Volts x2);

/// Encoded voltage in [0, d_max]. Even lines run left to right, odd lines
/// right to left, so the curve is continuous at every fold.
Volts encode(const MappingConfig& cfg, const SourceSample& s);

/// Modulus inversion of encode. The received voltage is clamped into
/// [0, d_max] first; only non-finite input is rejected.
DecodedPair decode(const MappingConfig& cfg, Volts v);

/// Nested 3:1 mapping. The inner pair (x1, x2) is encoded first and its
/// voltage becomes the continuous coordinate of the outer mapping, which
/// quantizes x3. Requires outer.v1 == inner.d_max.
Volts encode3(const MappingConfig& inner, const MappingConfig& outer,
              Volts x1, Volts x2, Volts x3);

Decoded3 decode3(const MappingConfig& inner, const MappingConfig& outer, Volts v);

}  // namespace ajscc
