#include "reskit/simulate.hpp"

#include "reskit/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace reskit {

namespace {

struct Derivative {
    std::vector<double> dx;
    std::vector<double> dv;
};

class ChainDynamics {
public:
    ChainDynamics(const ChainModel& model, const SampledSignal& input, SimMode mode)
        : model_(model), input_(input), mode_(mode), n_(model.n_nodes()) {
        if (mode_ == SimMode::Actuation) {
            // Channel c drives the c-th third of the segments.
            for (int c = 0; c < 3; ++c) {
                band_start_[c] = c * n_ / 3;
                band_end_[c] = (c + 1) * n_ / 3;
            }
        }
    }

    double base_position(double t) const {
        return mode_ == SimMode::BaseExcitation ? input_.value_at(0, t) : 0.0;
    }

    // Accelerations and velocity pass-through for state (x, v) at time t.
    void eval(const std::vector<double>& x, const std::vector<double>& v, double t,
              std::vector<double>& dx, std::vector<double>& dv) const {
        const double xb = base_position(t);

        // Spring force of each segment for its current extension.
        for (int i = 0; i < n_; ++i) {
            const double e = x[i] - (i == 0 ? xb : x[i - 1]);
            spring_[i] = model_.k1[i] * e + model_.k3 * e * e * e;
        }

        for (int i = 0; i < n_; ++i) {
            double force = -spring_[i] - model_.damping[i] * v[i];
            if (i + 1 < n_) force += spring_[i + 1];
            if (i == n_ - 1) force += model_.weight_force + model_.bias_force;
            accel_[i] = force / model_.node_mass[i];
        }

        if (mode_ == SimMode::Actuation) {
            for (int c = 0; c < 3; ++c) {
                const double f = input_.value_at(c, t);
                if (f == 0.0) continue;
                for (int i = band_start_[c]; i < band_end_[c]; ++i) {
                    // Contraction of segment i pulls node i toward its upper
                    // neighbor and the neighbor toward node i.
                    accel_[i] -= f / model_.node_mass[i];
                    if (i > 0) accel_[i - 1] += f / model_.node_mass[i - 1];
                }
            }
        }

        dx = v;
        dv = accel_;
    }

    double energy(const std::vector<double>& x, const std::vector<double>& v, double t) const {
        const double xb = base_position(t);
        double total = 0.0;
        for (int i = 0; i < n_; ++i) {
            const double e = x[i] - (i == 0 ? xb : x[i - 1]);
            total += 0.5 * model_.node_mass[i] * v[i] * v[i];
            total += 0.5 * model_.k1[i] * e * e + 0.25 * model_.k3 * e * e * e * e;
        }
        return total;
    }

private:
    const ChainModel& model_;
    const SampledSignal& input_;
    SimMode mode_;
    int n_;
    int band_start_[3] = {0, 0, 0};
    int band_end_[3] = {0, 0, 0};
    mutable std::vector<double> spring_ = std::vector<double>(n_);
    mutable std::vector<double> accel_ = std::vector<double>(n_);
};

SimMode resolve_mode(SimMode requested, int channels) {
    if (requested == SimMode::BaseExcitation || requested == SimMode::Actuation) {
        if (requested == SimMode::BaseExcitation && channels != 1) {
            throw ConfigError("base excitation needs a single-channel input");
        }
        if (requested == SimMode::Actuation && channels != 3) {
            throw ConfigError("actuation mode needs a 3-channel input");
        }
        return requested;
    }
    if (channels == 1) return SimMode::BaseExcitation;
    if (channels == 3) return SimMode::Actuation;
    throw ConfigError("cannot infer simulation mode from " + std::to_string(channels) +
                      " input channels (expected 1 or 3)");
}

} // namespace

SimOutcome simulate(const ChainModel& model, const SampledSignal& input, double duration_s,
                    const SimOptions& options) {
    if (!(duration_s > 0.0)) throw ConfigError("simulation duration must be > 0");
    if (input.n_samples() < 2) throw ConfigError("input signal needs >= 2 samples");
    if (input.duration() + 1e-9 < duration_s) {
        throw ConfigError("input signal (" + std::to_string(input.duration()) +
                          " s) does not cover the simulation duration");
    }

    const SimMode mode = resolve_mode(options.mode, input.n_channels());
    const int n = model.n_nodes();
    const double dt = model.config.integration_dt;
    const double fs = model.config.sample_rate;

    const double steps_per_sample_exact = 1.0 / (fs * dt);
    const long steps_per_sample = std::lround(steps_per_sample_exact);
    if (steps_per_sample < 1 ||
        std::abs(steps_per_sample_exact - static_cast<double>(steps_per_sample)) > 1e-9) {
        throw ConfigError("integration_dt must divide the sample interval 1/sample_rate");
    }

    const long n_steps = std::lround(duration_s / dt);
    const long n_samples = n_steps / steps_per_sample + 1;

    std::vector<double> x(n, 0.0), v(n, 0.0);
    if (options.initial_displacements.size() > 0) {
        if (options.initial_displacements.size() != n) {
            throw DimensionError("initial displacements size mismatch");
        }
        for (int i = 0; i < n; ++i) x[i] = options.initial_displacements(i);
    }
    if (options.initial_velocities.size() > 0) {
        if (options.initial_velocities.size() != n) {
            throw DimensionError("initial velocities size mismatch");
        }
        for (int i = 0; i < n; ++i) v[i] = options.initial_velocities(i);
    }

    ChainDynamics dynamics(model, input, mode);

    SimOutcome outcome;
    const bool include_base = (mode == SimMode::BaseExcitation);
    const int out_rows = n + (include_base ? 1 : 0);
    outcome.trajectory.displacements.resize(out_rows, n_samples);
    outcome.trajectory.times.resize(static_cast<size_t>(n_samples));
    outcome.trajectory.node_labels.resize(static_cast<size_t>(out_rows));
    for (int r = 0; r < out_rows; ++r) {
        const int node_id = include_base ? r : r + 1;
        outcome.trajectory.node_labels[static_cast<size_t>(r)] = "node_" + std::to_string(node_id);
    }
    outcome.energies.resize(static_cast<size_t>(n_samples));

    const double x_bound = options.blow_up_bound_m;
    const double v_bound = 100.0 * options.blow_up_bound_m;

    std::vector<double> k1x(n), k1v(n), k2x(n), k2v(n), k3x(n), k3v(n), k4x(n), k4v(n);
    std::vector<double> xt(n), vt(n);

    auto record_sample = [&](long sample_idx, double t) {
        outcome.trajectory.times[static_cast<size_t>(sample_idx)] =
            static_cast<double>(sample_idx) / fs;
        long r = 0;
        if (include_base) outcome.trajectory.displacements(r++, sample_idx) = dynamics.base_position(t);
        for (int i = 0; i < n; ++i) outcome.trajectory.displacements(r + i, sample_idx) = x[i];
        outcome.energies[static_cast<size_t>(sample_idx)] = dynamics.energy(x, v, t);
    };

    record_sample(0, 0.0);
    for (int i = 0; i < n; ++i) {
        outcome.max_displacement = std::max(outcome.max_displacement, std::abs(x[i]));
    }

    long next_sample = 1;
    for (long step = 0; step < n_steps; ++step) {
        const double t = static_cast<double>(step) * dt;

        dynamics.eval(x, v, t, k1x, k1v);
        for (int i = 0; i < n; ++i) {
            xt[i] = x[i] + 0.5 * dt * k1x[i];
            vt[i] = v[i] + 0.5 * dt * k1v[i];
        }
        dynamics.eval(xt, vt, t + 0.5 * dt, k2x, k2v);
        for (int i = 0; i < n; ++i) {
            xt[i] = x[i] + 0.5 * dt * k2x[i];
            vt[i] = v[i] + 0.5 * dt * k2v[i];
        }
        dynamics.eval(xt, vt, t + 0.5 * dt, k3x, k3v);
        for (int i = 0; i < n; ++i) {
            xt[i] = x[i] + dt * k3x[i];
            vt[i] = v[i] + dt * k3v[i];
        }
        dynamics.eval(xt, vt, t + dt, k4x, k4v);
        for (int i = 0; i < n; ++i) {
            x[i] += dt / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
            v[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        }

        for (int i = 0; i < n; ++i) {
            if (!(std::abs(x[i]) <= x_bound) || !(std::abs(v[i]) <= v_bound)) {
                throw InstabilityError(
                    "simulation diverged at step " + std::to_string(step + 1) + " (t = " +
                        std::to_string((step + 1) * dt) + " s), node " + std::to_string(i + 1),
                    step + 1, (step + 1) * dt);
            }
            outcome.max_displacement = std::max(outcome.max_displacement, std::abs(x[i]));
        }

        if ((step + 1) % steps_per_sample == 0 && next_sample < n_samples) {
            record_sample(next_sample, static_cast<double>(step + 1) * dt);
            ++next_sample;
        }
    }

    outcome.final_energy = outcome.energies.back();
    return outcome;
}

} // namespace reskit
