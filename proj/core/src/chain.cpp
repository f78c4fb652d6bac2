#include "reskit/chain.hpp"

#include "reskit/errors.hpp"

#include <cmath>

namespace reskit {

ModuleState ModuleState::parse(const std::string& word) {
    if (word.size() != 3) {
        throw ConfigError("module state word must have exactly 3 bits, got '" + word + "'");
    }
    ModuleState state;
    for (size_t i = 0; i < 3; ++i) {
        if (word[i] == '0') {
            state.bits[i] = 0;
        } else if (word[i] == '1') {
            state.bits[i] = 1;
        } else {
            throw ConfigError("module state bits must be 0 or 1, got '" + word + "'");
        }
    }
    return state;
}

double ModuleState::stiffness_multiplier(double stiffness_ratio) const {
    double sum = 0.0;
    for (uint8_t b : bits) sum += b ? stiffness_ratio : 1.0;
    return sum / 3.0;
}

std::string ModuleState::word() const {
    std::string out(3, '0');
    for (size_t i = 0; i < 3; ++i) out[i] = bits[i] ? '1' : '0';
    return out;
}

void ChainConfig::validate() const {
    if (modules.empty()) throw ConfigError("chain config needs at least one module");
    if (nodes_per_module < 1) throw ConfigError("nodes_per_module must be >= 1");
    auto finite_positive = [](double v, const char* name) {
        if (!std::isfinite(v) || v <= 0.0) {
            throw ConfigError(std::string(name) + " must be finite and > 0");
        }
    };
    finite_positive(node_mass_kg, "node_mass_kg");
    finite_positive(soft_linear_stiffness, "soft_linear_stiffness");
    finite_positive(stiffness_ratio, "stiffness_ratio");
    finite_positive(integration_dt, "integration_dt");
    finite_positive(sample_rate, "sample_rate");
    if (!std::isfinite(damping_ratio) || damping_ratio <= 0.0 || damping_ratio >= 1.0) {
        throw ConfigError("damping_ratio must lie in (0, 1)");
    }
    if (!std::isfinite(cubic_coefficient) || cubic_coefficient < 0.0) {
        throw ConfigError("cubic_coefficient must be finite and >= 0");
    }
    if (!std::isfinite(payload_mass_kg) || payload_mass_kg < 0.0) {
        throw ConfigError("payload_mass_kg must be finite and >= 0");
    }
    if (!std::isfinite(payload_eccentricity_m)) {
        throw ConfigError("payload_eccentricity_m must be finite");
    }
    if (integration_dt > 1.0 / (2.0 * sample_rate)) {
        throw ConfigError("integration_dt must be <= 1/(2*sample_rate)");
    }
}

ChainModel build_chain(const ChainConfig& config) {
    config.validate();

    ChainModel model;
    model.config = config;
    model.k3 = config.cubic_coefficient;

    const int n = config.n_dynamic_nodes();
    model.k1.resize(n);
    model.node_mass.resize(n);
    model.damping.resize(n);

    for (int i = 0; i < n; ++i) {
        const int module_idx = i / config.nodes_per_module;
        const double mult = config.modules[module_idx].stiffness_multiplier(config.stiffness_ratio);
        model.k1[i] = config.soft_linear_stiffness * mult;
        model.node_mass[i] = config.node_mass_kg;
    }
    model.node_mass[n - 1] += config.payload_mass_kg;

    // Damping coefficient per node from the ratio and the segment above it.
    for (int i = 0; i < n; ++i) {
        model.damping[i] = 2.0 * config.damping_ratio * std::sqrt(model.node_mass[i] * model.k1[i]);
    }

    model.weight_force = config.payload_mass_kg * kGravity;
    model.bias_force = config.payload_mass_kg * kGravity * config.payload_eccentricity_m;
    return model;
}

} // namespace reskit
