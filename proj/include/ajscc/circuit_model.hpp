#pragma once

// Behavioral model of the per-level analog encoder: comparators on the
// humidity voltage V_H select, for every level, one of three multiplexer
// inputs (0, V_R, or a VCVS output driven by the temperature voltage V_T).
// The summed multiplexer outputs form the encoded voltage.

#include <vector>

#include "ajscc/mapping.hpp"

namespace ajscc {

struct CircuitConfig {
    int num_levels = 11;
    Volts delta_h = 0.3;  // humidity spacing between levels
    Volts v_r = 1.0;      // saturation voltage, one full level length
    Volts vt_max = 1.0;   // full range of V_T
    // thresholds[j - 1] separates level j - 1 from level j.
    std::vector<Volts> thresholds;
    QuantizerMode placement = QuantizerMode::Floor;

    // Non-idealities. VCVS outputs become (1 + gain_error) * ideal + offset_error;
    // every comparator threshold is shifted by threshold_offset.
    double gain_error = 0.0;
    Volts offset_error = 0.0;
    Volts threshold_offset = 0.0;

    Volts vh_max() const { return (num_levels - 1) * delta_h; }
    Volts full_length() const { return num_levels * v_r; }
};

/// Thresholds are placed at j * delta_h (floor) or (j - 0.5) * delta_h (nearest).
CircuitConfig make_circuit_config(int num_levels, Volts delta_h, Volts v_r, Volts vt_max,
                                  QuantizerMode placement = QuantizerMode::Floor);

/// The 11-level, 0.3 V prototype with unit V_T range.
CircuitConfig prototype_circuit(QuantizerMode placement = QuantizerMode::Floor);

/// Mapping config the ideal circuit is equivalent to: d_max = L * V_R,
/// v2 = (L - 1) * delta_h, so v1 == V_R and delta == delta_h.
MappingConfig equivalent_mapping(const CircuitConfig& cfg);

enum class LevelSelect {
    Below,  // V_H below the level, contributes nothing
    On,     // the mapped point lies on this level
    Above,  // V_H above the level, contributes a full level
};

std::vector<LevelSelect> comparator_selects(const CircuitConfig& cfg, Volts vh);

Volts vcvs_type1(const CircuitConfig& cfg, Volts vt);
Volts vcvs_type2(const CircuitConfig& cfg, Volts vt);

enum class ContributionKind { Zero, Partial, Full };

struct LevelContribution {
    ContributionKind kind = ContributionKind::Zero;
    Volts voltage = 0.0;
};

// level_index is 0-based: even indices are the odd-numbered (Type-1) levels.
LevelContribution level_contribution(const CircuitConfig& cfg, int level_index, Volts vt, Volts vh);

Volts circuit_encode(const CircuitConfig& cfg, Volts vt, Volts vh);

struct ComponentBudget {
    int opamp_count = 0;
    int comparator_count = 0;
    int mux_count = 0;
    double opamp_power = 0.0;  // watts per device
    double comparator_power = 0.0;
    double mux_power = 0.0;
};

/// 16 OpAmps at 8 uW, 17 comparators at 12.7 nW, 11 muxes at 10 nW.
ComponentBudget prototype_budget();

double estimate_power(const ComponentBudget& budget);

}  // namespace ajscc
