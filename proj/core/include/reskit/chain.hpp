#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace reskit {

/// Stable state of one chain module: three panels, each soft (0) or
/// stiff (1). A module therefore has 2^3 distinct states.
struct ModuleState {
    std::array<uint8_t, 3> bits{0, 0, 0};

    /// Parse a word like "010". Throws ConfigError on anything else.
    static ModuleState parse(const std::string& word);

    /// Linear-stiffness multiplier of this state: the mean over the three
    /// panels of (ratio for a stiff panel, 1 for a soft one). All-soft gives
    /// 1, all-stiff gives `stiffness_ratio`.
    double stiffness_multiplier(double stiffness_ratio) const;

    std::string word() const;

    bool operator==(const ModuleState&) const = default;
};

/// Full description of a module chain: geometry, constitutive constants,
/// payload and discretization. Defaults give a 5-module all-soft chain of
/// 40 dynamic nodes sampled at 60 Hz.
struct ChainConfig {
    std::vector<ModuleState> modules;
    int nodes_per_module = 8;
    double node_mass_kg = 0.02;
    double damping_ratio = 0.03;
    // The soft stiffness puts the default 40-node chain's first mode near
    // 4.1 Hz (the all-stiff chain lands near 8.3 Hz).
    double soft_linear_stiffness = 9000.0; // N/m
    double stiffness_ratio = 4.0;          // stiff/soft
    double cubic_coefficient = 1e7;        // N/m^3
    double payload_mass_kg = 0.0;
    double payload_eccentricity_m = 0.0;   // signed lateral offset of the payload
    double integration_dt = 1.0 / 3000.0;  // s
    double sample_rate = 60.0;             // Hz

    int n_dynamic_nodes() const { return static_cast<int>(modules.size()) * nodes_per_module; }

    /// Throws ConfigError when any invariant is violated.
    void validate() const;
};

/// Immutable simulation model produced by build_chain(). Segment i connects
/// dynamic node i to the node above it (the base for i = 0); its restoring
/// force for extension e is k1[i]*e + k3*e^3.
struct ChainModel {
    std::vector<double> k1;        // per-segment linear stiffness, N/m
    double k3 = 0.0;               // shared cubic coefficient, N/m^3
    std::vector<double> node_mass; // per dynamic node, kg
    std::vector<double> damping;   // per dynamic node, N*s/m
    double weight_force = 0.0;     // payload gravity load on the last node, N
    double bias_force = 0.0;       // eccentricity bias on the last node, N
    ChainConfig config;

    int n_nodes() const { return static_cast<int>(k1.size()); }
};

/// Realize a ChainConfig as a lumped chain model. Each module contributes
/// `nodes_per_module` consecutive segments whose linear stiffness is the
/// soft value times the module state's multiplier. The payload mass is added
/// to the last node; its gravity load stretches the chain to a visible
/// static sag, and an eccentric payload contributes a further bias force
/// payload_mass * g * eccentricity there. Displacements are measured from
/// the unloaded chain's rest shape, so the bare chain at rest reads zero.
ChainModel build_chain(const ChainConfig& config);

inline constexpr double kGravity = 9.80665; // m/s^2

} // namespace reskit
