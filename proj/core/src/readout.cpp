#include "reskit/readout.hpp"

#include "reskit/csv.hpp"
#include "reskit/errors.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <fstream>
#include <sstream>

namespace reskit {

namespace {

constexpr double kSingularValueCutoff = 1e-10;

} // namespace

void SplitSpec::validate(long available_samples) const {
    if (washout < 0 || train <= 0 || test < 0) {
        throw ConfigError("split windows must satisfy washout >= 0, train > 0, test >= 0");
    }
    if (total() > available_samples) {
        throw ConfigError("split needs " + std::to_string(total()) + " samples, trajectory has " +
                          std::to_string(available_samples));
    }
}

ReadoutWeights train_readout(const StateTrajectory& states, const Eigen::VectorXd& target,
                             double ridge, const std::string& provenance) {
    const long t_len = states.n_samples();
    const int n = states.n_nodes();
    if (target.size() != t_len) {
        throw DimensionError("target length " + std::to_string(target.size()) +
                             " does not match trajectory samples " + std::to_string(t_len));
    }
    if (t_len < 1 || n < 1) throw ConfigError("empty training data");
    if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw ConfigError("ridge must be >= 0");

    // Design matrix [1 S(t)'] with one row per sample.
    Eigen::MatrixXd design(t_len, n + 1);
    design.col(0).setOnes();
    design.rightCols(n) = states.displacements.transpose();

    Eigen::BDCSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
    const double cutoff = kSingularValueCutoff * sigma_max;

    Eigen::VectorXd uty = svd.matrixU().transpose() * target;
    Eigen::VectorXd filtered(sigma.size());
    bool rank_deficient = false;
    for (long i = 0; i < sigma.size(); ++i) {
        const double s = sigma(i);
        if (ridge > 0.0) {
            filtered(i) = uty(i) * s / (s * s + ridge);
        } else if (s > cutoff) {
            filtered(i) = uty(i) / s;
        } else {
            filtered(i) = 0.0;
            rank_deficient = true;
        }
    }
    Eigen::VectorXd solution = svd.matrixV() * filtered;

    ReadoutWeights out;
    out.bias = solution(0);
    out.weights = solution.tail(n);
    out.ridge = ridge;
    out.provenance = provenance;
    out.rank_deficient = rank_deficient && ridge == 0.0;
    for (long i = 0; i < solution.size(); ++i) {
        if (!std::isfinite(solution(i))) throw ConfigError("readout training produced non-finite weights");
    }
    return out;
}

Eigen::VectorXd predict(const ReadoutWeights& weights, const StateTrajectory& states) {
    if (weights.n_nodes() != states.n_nodes()) {
        throw DimensionError("readout has " + std::to_string(weights.n_nodes()) +
                             " weights, trajectory has " + std::to_string(states.n_nodes()) +
                             " nodes");
    }
    return (states.displacements.transpose() * weights.weights).array() + weights.bias;
}

TrainTestSplit split(const StateTrajectory& trajectory, const Eigen::VectorXd& target,
                     const SplitSpec& spec) {
    if (target.size() != trajectory.n_samples()) {
        throw DimensionError("target length does not match trajectory samples");
    }
    spec.validate(trajectory.n_samples());

    TrainTestSplit out;
    out.train_states = trajectory.slice(spec.washout, spec.train);
    out.train_target = target.segment(spec.washout, spec.train);
    out.test_states = trajectory.slice(spec.washout + spec.train, spec.test);
    out.test_target = target.segment(spec.washout + spec.train, spec.test);
    return out;
}

StateTrajectory signal_as_states(const SampledSignal& input, const std::vector<double>& at_times) {
    if (input.n_channels() != 1) throw DimensionError("expected a single-channel input signal");
    StateTrajectory states;
    states.times = at_times;
    states.displacements.resize(1, static_cast<long>(at_times.size()));
    states.displacements.row(0) = input.resample(0, at_times).transpose();
    states.node_labels = {"input"};
    return states;
}

ReadoutWeights baseline_input_regression(const SampledSignal& input,
                                         const std::vector<double>& target_times,
                                         const Eigen::VectorXd& target, double ridge) {
    return train_readout(signal_as_states(input, target_times), target, ridge, "baseline");
}

void export_weights(const ReadoutWeights& weights, const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot write " + path.string());
    file << "index,weight\n";
    file << "0," << csv::format_double(weights.bias) << "\n";
    for (long i = 0; i < weights.weights.size(); ++i) {
        file << (i + 1) << ',' << csv::format_double(weights.weights(i)) << "\n";
    }
}

ReadoutWeights import_weights(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot open " + path.string());
    std::string line;
    if (!std::getline(file, line) || line != "index,weight") {
        throw ConfigError("bad weights header in " + path.string());
    }
    std::vector<double> values;
    long expected = 0;
    while (std::getline(file, line)) {
        if (line.empty()) continue;
        auto fields = csv::split_line(line);
        if (fields.size() != 2) throw ConfigError("bad weights row in " + path.string());
        if (csv::parse_int(fields[0]) != expected) {
            throw ConfigError("weights rows out of order in " + path.string());
        }
        values.push_back(csv::parse_double(fields[1]));
        ++expected;
    }
    if (values.empty()) throw ConfigError("weights file has no rows: " + path.string());
    ReadoutWeights out;
    out.bias = values[0];
    out.weights.resize(static_cast<long>(values.size()) - 1);
    for (size_t i = 1; i < values.size(); ++i) out.weights(static_cast<long>(i) - 1) = values[i];
    return out;
}

} // namespace reskit
