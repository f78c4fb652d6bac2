#include "reskit/perception.hpp"

#include "reskit/errors.hpp"
#include "reskit/metrics.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace reskit {

namespace {

long seconds_to_samples(double seconds, double sample_rate) {
    return static_cast<long>(std::llround(seconds * sample_rate));
}

const LabeledRun& find_run_for_mass(const std::vector<LabeledRun>& runs, double mass_g) {
    for (const auto& run : runs) {
        if (std::abs(run.payload_mass_g - mass_g) < 1e-9) return run;
    }
    throw ConfigError("no run with payload mass " + std::to_string(mass_g) + " g");
}

} // namespace

EstimatorBundle train_weight_estimator_sequence(const std::vector<const LabeledRun*>& runs_in_order,
                                                const std::vector<double>& target_masses_g,
                                                double segment_s, const EstimatorOptions& options) {
    if (runs_in_order.empty()) throw ConfigError("need at least one training run");
    if (runs_in_order.size() != target_masses_g.size()) {
        throw DimensionError("one target mass per training run required");
    }
    if (!(segment_s > 0.0)) throw ConfigError("segment length must be > 0");

    const double fs = runs_in_order.front()->trajectory.sample_rate();
    const long washout_n = seconds_to_samples(options.washout_s, fs);
    const long segment_n = seconds_to_samples(segment_s, fs);
    if (segment_n < 1) throw ConfigError("segment too short at this sample rate");

    const int n_nodes = runs_in_order.front()->trajectory.n_nodes();

    StateTrajectory training;
    training.displacements.resize(n_nodes, segment_n * static_cast<long>(runs_in_order.size()));
    std::vector<std::pair<double, double>> target_segments;
    long col = 0;
    for (size_t r = 0; r < runs_in_order.size(); ++r) {
        const LabeledRun& run = *runs_in_order[r];
        if (run.trajectory.n_nodes() != n_nodes) {
            throw DimensionError("node count mismatch across runs: " +
                                 std::to_string(run.trajectory.n_nodes()) + " vs " +
                                 std::to_string(n_nodes));
        }
        if (run.trajectory.n_samples() < washout_n + segment_n) {
            throw ConfigError("run for mass " + std::to_string(target_masses_g[r]) +
                              " g too short for washout + segment");
        }
        training.displacements.middleCols(col, segment_n) =
            run.trajectory.displacements.middleCols(washout_n, segment_n);
        target_segments.emplace_back(target_masses_g[r], segment_s);
        col += segment_n;
    }
    // Concatenated columns get a synthetic uniform clock.
    training.times.resize(static_cast<size_t>(training.displacements.cols()));
    for (size_t k = 0; k < training.times.size(); ++k) {
        training.times[k] = static_cast<double>(k) / fs;
    }
    training.node_labels = runs_in_order.front()->trajectory.node_labels;

    // Both use the same rounding rule, so the lengths agree by construction.
    const Eigen::VectorXd target = piecewise_constant_target(target_segments, fs);
    if (target.size() != training.displacements.cols()) {
        throw DimensionError("target and concatenated states length mismatch");
    }

    EstimatorBundle bundle;
    bundle.weights = train_readout(training, target, options.ridge, "weight-estimator");
    bundle.training_masses_g = target_masses_g;
    std::sort(bundle.training_masses_g.begin(), bundle.training_masses_g.end());
    bundle.training_masses_g.erase(
        std::unique(bundle.training_masses_g.begin(), bundle.training_masses_g.end()),
        bundle.training_masses_g.end());
    bundle.washout_s = options.washout_s;
    bundle.window_s = options.window_s;
    return bundle;
}

EstimatorBundle train_weight_estimator(const std::vector<LabeledRun>& runs,
                                       const std::vector<double>& masses_used_g,
                                       double segment_s, const EstimatorOptions& options) {
    if (masses_used_g.empty()) throw ConfigError("masses_used_g must be non-empty");

    std::vector<double> masses = masses_used_g;
    std::sort(masses.begin(), masses.end());
    for (size_t i = 1; i < masses.size(); ++i) {
        if (masses[i] == masses[i - 1]) throw ConfigError("training masses must be distinct");
    }

    std::vector<const LabeledRun*> ordered;
    for (double mass : masses) ordered.push_back(&find_run_for_mass(runs, mass));
    return train_weight_estimator_sequence(ordered, masses, segment_s, options);
}

double estimate_weight(const EstimatorBundle& bundle, const LabeledRun& run) {
    const double fs = run.trajectory.sample_rate();
    const long start = seconds_to_samples(bundle.washout_s, fs);
    long count = seconds_to_samples(bundle.window_s, fs);
    if (count < 1) throw ConfigError("evaluation window too short");
    if (start + count > run.trajectory.n_samples()) {
        throw ConfigError("run too short for the evaluation window");
    }
    const StateTrajectory window = run.trajectory.slice(start, count);
    return predict(bundle.weights, window).mean();
}

InputReconstruction reconstruct_inputs(const LabeledRun& run, const ReconstructionOptions& options) {
    if (run.input.n_channels() != 3) {
        throw DimensionError("input reconstruction needs a 3-channel input, got " +
                             std::to_string(run.input.n_channels()));
    }
    const double fs = run.trajectory.sample_rate();
    const long train_n = seconds_to_samples(options.train_s, fs);
    const long test_n = seconds_to_samples(options.test_s, fs);
    if (run.trajectory.n_samples() < train_n + test_n) {
        throw ConfigError("run too short: need " + std::to_string(train_n + test_n) +
                          " samples for train + test windows");
    }

    const StateTrajectory train_states = run.trajectory.slice(0, train_n);
    const StateTrajectory test_states = run.trajectory.slice(train_n, test_n);

    InputReconstruction out;
    out.test_times = test_states.times;
    for (int c = 0; c < 3; ++c) {
        const Eigen::VectorXd train_target = run.input.resample(c, train_states.times);
        const Eigen::VectorXd test_target = run.input.resample(c, test_states.times);
        const ReadoutWeights weights =
            train_readout(train_states, train_target, options.ridge,
                          "input-channel-" + std::to_string(c + 1));
        out.reconstructed[static_cast<size_t>(c)] = predict(weights, test_states);
        out.mse[static_cast<size_t>(c)] = mse(test_target, out.reconstructed[static_cast<size_t>(c)]);
    }
    return out;
}

Orientation snap_orientation(double mean_output) {
    // Midpoint ties resolve toward front.
    if (std::abs(mean_output) <= 0.5) return Orientation::Front;
    return mean_output < 0.0 ? Orientation::Left : Orientation::Right;
}

Classification classify_payload(const EstimatorBundle& bundle,
                                const ReadoutWeights& orientation_weights, const LabeledRun& run) {
    Classification result;
    result.estimate_g = estimate_weight(bundle, run);
    if (result.estimate_g < kHammerBandLowG || result.estimate_g > kHammerBandHighG) {
        return result;
    }
    const double fs = run.trajectory.sample_rate();
    const long start = seconds_to_samples(bundle.washout_s, fs);
    const long count = seconds_to_samples(bundle.window_s, fs);
    const StateTrajectory window = run.trajectory.slice(start, count);
    result.orientation = snap_orientation(predict(orientation_weights, window).mean());
    return result;
}

std::vector<LabeledRun> load_run_manifest(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open manifest " + path.string());
    detail::json doc;
    try {
        doc = detail::json::parse(file);
    } catch (const detail::json::parse_error& e) {
        throw ConfigError("manifest parse error in " + path.string() + ": " + e.what());
    }
    if (!doc.contains("runs") || !doc.at("runs").is_array()) {
        throw ConfigError("manifest needs a 'runs' array");
    }

    const auto base_dir = path.parent_path();
    std::vector<LabeledRun> runs;
    for (const auto& entry : doc.at("runs")) {
        LabeledRun run;
        const std::string traj_file = entry.at("trajectory").get<std::string>();
        run.trajectory = import_trajectory(base_dir / traj_file);
        run.payload_mass_g = entry.at("mass_g").get<double>();
        if (run.payload_mass_g < 0.0) throw ConfigError("manifest mass_g must be >= 0");
        if (entry.contains("orientation") && !entry.at("orientation").is_null()) {
            const int label = entry.at("orientation").get<int>();
            if (label < -1 || label > 1) {
                throw ConfigError("orientation label must be -1, 0 or +1");
            }
            run.orientation = static_cast<Orientation>(label);
        }
        run.repetition = entry.value("repetition", 0);
        if (entry.contains("input")) {
            run.input = make_signal(detail::signal_spec_from_json(entry.at("input")));
        }
        runs.push_back(std::move(run));
    }
    return runs;
}

} // namespace reskit
