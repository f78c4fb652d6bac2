#pragma once

#include "reskit/signals.hpp"
#include "reskit/trajectory.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <string>

namespace reskit {

/// Washout/train/test window sizes in samples. Windows are contiguous and
/// non-overlapping in that order; the washout is discarded.
struct SplitSpec {
    long washout = 600;
    long train = 300;
    long test = 300;

    long total() const { return washout + train + test; }
    void validate(long available_samples) const;
};

/// Trained affine output layer: prediction(t) = bias + sum_i weights[i] * s_i(t).
struct ReadoutWeights {
    double bias = 0.0;
    Eigen::VectorXd weights; // one per node
    double ridge = 0.0;
    std::string provenance;
    /// Set when the unregularized design matrix was rank-deficient and the
    /// minimum-norm solution was returned.
    bool rank_deficient = false;

    int n_nodes() const { return static_cast<int>(weights.size()); }
};

struct TrainTestSplit {
    StateTrajectory train_states;
    Eigen::VectorXd train_target;
    StateTrajectory test_states;
    Eigen::VectorXd test_target;
};

/// Least-squares fit of [1 S(t)'] w = y over the given trajectory window.
/// ridge = 0 solves via pseudo-inverse (singular values below 1e-10 of the
/// largest are treated as zero, yielding the minimum-norm solution);
/// ridge > 0 gives the Tikhonov-regularized solution. Deterministic.
ReadoutWeights train_readout(const StateTrajectory& states, const Eigen::VectorXd& target,
                             double ridge = 0.0, const std::string& provenance = "");

/// Apply the affine readout to every sample of a trajectory.
Eigen::VectorXd predict(const ReadoutWeights& weights, const StateTrajectory& states);

/// Cut washout/train/test windows out of a trajectory and aligned target.
TrainTestSplit split(const StateTrajectory& trajectory, const Eigen::VectorXd& target,
                     const SplitSpec& spec);

/// One-feature affine regression of the target directly on the input
/// stream, using the same solver as train_readout. The input is resampled
/// at the target's sample times, which the caller provides.
ReadoutWeights baseline_input_regression(const SampledSignal& input,
                                         const std::vector<double>& target_times,
                                         const Eigen::VectorXd& target, double ridge = 0.0);

/// View a single-channel signal as a one-node trajectory so the readout
/// machinery can train and predict on raw inputs.
StateTrajectory signal_as_states(const SampledSignal& input, const std::vector<double>& at_times);

/// `index,weight` CSV with index 0 = bias.
void export_weights(const ReadoutWeights& weights, const std::filesystem::path& path);
ReadoutWeights import_weights(const std::filesystem::path& path);

} // namespace reskit
