#include "ajscc/circuit_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ajscc/errors.hpp"

namespace ajscc {

namespace {

void validate(const CircuitConfig& cfg) {
    if (cfg.num_levels < 2) throw ConfigError("circuit needs at least 2 levels");
    if (!(cfg.delta_h > 0.0)) throw ConfigError("delta_h must be positive");
    if (!(cfg.v_r > 0.0)) throw ConfigError("v_r must be positive");
    if (!(cfg.vt_max > 0.0)) throw ConfigError("vt_max must be positive");
    if (cfg.thresholds.size() != static_cast<std::size_t>(cfg.num_levels - 1)) {
        throw ConfigError("expected " + std::to_string(cfg.num_levels - 1) + " thresholds");
    }
    for (std::size_t i = 1; i < cfg.thresholds.size(); ++i) {
        if (!(cfg.thresholds[i] > cfg.thresholds[i - 1])) {
            throw ConfigError("thresholds must be strictly increasing");
        }
    }
}

void check_inputs(const CircuitConfig& cfg, Volts vt, Volts vh) {
    if (!std::isfinite(vt) || vt < 0.0 || vt > cfg.vt_max) {
        throw RangeError("vt=" + std::to_string(vt) + " outside [0, vt_max]");
    }
    if (!std::isfinite(vh) || vh < 0.0 || vh > cfg.vh_max()) {
        throw RangeError("vh=" + std::to_string(vh) + " outside [0, vh_max]");
    }
}

// Index of the level whose comparator window contains vh. Thresholds are
// increasing, so the comparators form a thermometer code.
int active_level(const CircuitConfig& cfg, Volts vh) {
    int level = 0;
    for (Volts t : cfg.thresholds) {
        if (vh >= t + cfg.threshold_offset) ++level;
    }
    return level;
}

}  // namespace

CircuitConfig make_circuit_config(int num_levels, Volts delta_h, Volts v_r, Volts vt_max,
                                  QuantizerMode placement) {
    CircuitConfig cfg;
    cfg.num_levels = num_levels;
    cfg.delta_h = delta_h;
    cfg.v_r = v_r;
    cfg.vt_max = vt_max;
    cfg.placement = placement;
    double shift = placement == QuantizerMode::NearestLine ? 0.5 : 0.0;
    for (int j = 1; j < num_levels; ++j) cfg.thresholds.push_back((j - shift) * delta_h);
    validate(cfg);
    return cfg;
}

CircuitConfig prototype_circuit(QuantizerMode placement) {
    return make_circuit_config(11, 0.3, 1.0, 1.0, placement);
}

MappingConfig equivalent_mapping(const CircuitConfig& cfg) {
    validate(cfg);
    return make_config(cfg.num_levels * cfg.v_r, cfg.num_levels, cfg.vh_max(), cfg.placement);
}

std::vector<LevelSelect> comparator_selects(const CircuitConfig& cfg, Volts vh) {
    validate(cfg);
    check_inputs(cfg, 0.0, vh);
    int active = active_level(cfg, vh);
    std::vector<LevelSelect> out(cfg.num_levels, LevelSelect::Below);
    for (int j = 0; j < cfg.num_levels; ++j) {
        if (j < active) out[j] = LevelSelect::Above;
        else if (j == active) out[j] = LevelSelect::On;
    }
    return out;
}

Volts vcvs_type1(const CircuitConfig& cfg, Volts vt) {
    double ideal = cfg.v_r / cfg.vt_max * vt;
    return std::clamp((1.0 + cfg.gain_error) * ideal + cfg.offset_error, 0.0, cfg.v_r);
}

Volts vcvs_type2(const CircuitConfig& cfg, Volts vt) {
    double ideal = cfg.v_r - cfg.v_r / cfg.vt_max * vt;
    return std::clamp((1.0 + cfg.gain_error) * ideal + cfg.offset_error, 0.0, cfg.v_r);
}

LevelContribution level_contribution(const CircuitConfig& cfg, int level_index, Volts vt, Volts vh) {
    if (level_index < 0 || level_index >= cfg.num_levels) {
        throw RangeError("level index " + std::to_string(level_index) + " out of range");
    }
    validate(cfg);
    check_inputs(cfg, vt, vh);
    int active = active_level(cfg, vh);
    if (level_index < active) return {ContributionKind::Full, cfg.v_r};
    if (level_index > active) return {ContributionKind::Zero, 0.0};
    Volts partial = level_index % 2 == 0 ? vcvs_type1(cfg, vt) : vcvs_type2(cfg, vt);
    return {ContributionKind::Partial, partial};
}

Volts circuit_encode(const CircuitConfig& cfg, Volts vt, Volts vh) {
    validate(cfg);
    check_inputs(cfg, vt, vh);
    int active = active_level(cfg, vh);
    Volts total = 0.0;
    for (int j = 0; j < cfg.num_levels; ++j) {
        if (j < active) total += cfg.v_r;
        else if (j == active) total += j % 2 == 0 ? vcvs_type1(cfg, vt) : vcvs_type2(cfg, vt);
    }
    return total;
}

ComponentBudget prototype_budget() {
    ComponentBudget b;
    b.opamp_count = 16;
    b.comparator_count = 17;
    b.mux_count = 11;
    b.opamp_power = 8e-6;
    b.comparator_power = 12.7e-9;
    b.mux_power = 10e-9;
    return b;
}

double estimate_power(const ComponentBudget& budget) {
    if (budget.opamp_count < 0 || budget.comparator_count < 0 || budget.mux_count < 0 ||
        budget.opamp_power < 0.0 || budget.comparator_power < 0.0 || budget.mux_power < 0.0) {
        throw ConfigError("component budget entries must be non-negative");
    }
    return budget.opamp_count * budget.opamp_power +
           budget.comparator_count * budget.comparator_power +
           budget.mux_count * budget.mux_power;
}

}  // namespace ajscc
