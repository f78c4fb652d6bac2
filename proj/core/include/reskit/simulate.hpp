#pragma once

#include "reskit/chain.hpp"
#include "reskit/signals.hpp"
#include "reskit/trajectory.hpp"

#include <Eigen/Dense>

#include <vector>

namespace reskit {

enum class SimMode {
    Auto,           // 1 input channel -> BaseExcitation, 3 -> Actuation
    BaseExcitation, // node 0 position prescribed by the input
    Actuation,      // base fixed; input channels force segment bands
};

struct SimOptions {
    SimMode mode = SimMode::Auto;
    /// Initial conditions for the dynamic nodes; empty means zero.
    Eigen::VectorXd initial_displacements;
    Eigen::VectorXd initial_velocities;
    /// Any |x| beyond this (or |v| beyond 100x it) aborts with an
    /// InstabilityError naming the offending step.
    double blow_up_bound_m = 1.0;
};

struct SimOutcome {
    StateTrajectory trajectory;
    double final_energy = 0.0;       // J, kinetic + elastic at the last step
    double max_displacement = 0.0;   // m, over every integration step
    std::vector<double> energies;    // J, at each trajectory sample
};

/// Integrate the chain's equations of motion under the given input for
/// `duration_s` seconds with fixed-step RK4 at the model's integration_dt,
/// then downsample to the model's sample_rate.
///
/// Base-excitation mode prescribes the base position from input channel 0
/// and the returned trajectory includes that base as node_0. Actuation mode
/// keeps the base fixed and applies each input channel as a contraction
/// force on one contiguous third of the segments; only the dynamic nodes
/// appear in the trajectory.
///
/// The result is a pure function of (model, input, duration, options):
/// repeated calls are bit-identical.
SimOutcome simulate(const ChainModel& model, const SampledSignal& input, double duration_s,
                    const SimOptions& options = {});

} // namespace reskit
