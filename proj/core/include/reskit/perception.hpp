#pragma once

#include "reskit/readout.hpp"
#include "reskit/signals.hpp"
#include "reskit/trajectory.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <vector>

namespace reskit {

enum class Orientation : int { Left = -1, Front = 0, Right = 1 };

/// Payload weight band (grams) within which the eccentric item is assumed
/// held and orientation classification runs.
inline constexpr double kHammerBandLowG = 140.0;
inline constexpr double kHammerBandHighG = 180.0;

/// One recorded excitation experiment: the trajectory, what was attached,
/// and the input that drove it.
struct LabeledRun {
    StateTrajectory trajectory;
    double payload_mass_g = 0.0;
    std::optional<Orientation> orientation;
    SampledSignal input;
    int repetition = 0;
};

/// A weight-estimation readout plus the protocol it was trained under.
struct EstimatorBundle {
    ReadoutWeights weights;
    std::vector<double> training_masses_g; // sorted, distinct
    double washout_s = 0.0;
    double window_s = 5.0;
};

struct EstimatorOptions {
    double washout_s = 0.0; // discarded from the head of every run
    double window_s = 5.0;  // evaluation window length after the washout
    double ridge = 0.0;
};

/// Train one readout on per-mass state segments concatenated in ascending
/// mass order against the matching piecewise-constant mass target. Exactly
/// one run per requested mass must be present.
EstimatorBundle train_weight_estimator(const std::vector<LabeledRun>& runs,
                                       const std::vector<double>& masses_used_g,
                                       double segment_s, const EstimatorOptions& options = {});

/// Same training scheme, but the segments are concatenated in the given run
/// order with an explicit target mass per run. Allows repeated masses (e.g.
/// the same item in several orientations).
EstimatorBundle train_weight_estimator_sequence(const std::vector<const LabeledRun*>& runs_in_order,
                                                const std::vector<double>& target_masses_g,
                                                double segment_s,
                                                const EstimatorOptions& options = {});

/// Predicted payload weight: the readout output averaged over the bundle's
/// evaluation window.
double estimate_weight(const EstimatorBundle& bundle, const LabeledRun& run);

struct InputReconstruction {
    std::array<Eigen::VectorXd, 3> reconstructed; // test-window outputs
    std::array<double, 3> mse{0.0, 0.0, 0.0};
    std::vector<double> test_times;
};

struct ReconstructionOptions {
    double train_s = 15.0;
    double test_s = 15.0;
    double ridge = 0.0;
};

/// Train three readouts in parallel, one per input channel, on the first
/// `train_s` seconds of the run, then reconstruct each channel over the
/// following `test_s` seconds and report the per-channel test MSE. The run
/// must carry a 3-channel input and be long enough for both windows.
InputReconstruction reconstruct_inputs(const LabeledRun& run,
                                       const ReconstructionOptions& options = {});

struct Classification {
    double estimate_g = 0.0;
    std::optional<Orientation> orientation;
};

/// Two-stage payload identification: estimate the weight; when it falls in
/// [140, 180] g, apply the orientation readout and snap its time-mean to the
/// nearest of {-1, 0, +1} (ties at the midpoints resolve toward 0/front).
Classification classify_payload(const EstimatorBundle& bundle,
                                const ReadoutWeights& orientation_weights, const LabeledRun& run);

/// Snap an orientation readout mean to a discrete label.
Orientation snap_orientation(double mean_output);

/// JSON manifest listing runs: trajectory file, mass, orientation and input
/// spec per run. Trajectory paths resolve relative to the manifest file.
std::vector<LabeledRun> load_run_manifest(const std::filesystem::path& path);

} // namespace reskit
