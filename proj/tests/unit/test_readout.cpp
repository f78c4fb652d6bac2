#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reskit/errors.hpp"
#include "reskit/metrics.hpp"
#include "reskit/readout.hpp"

#include "../oracles.hpp"

#include <filesystem>
#include <fstream>

using namespace reskit;
namespace fs = std::filesystem;

namespace {

StateTrajectory random_states(int n_nodes, long n_samples, uint64_t seed, double fs = 60.0) {
    oracle::Rng rng(seed);
    StateTrajectory states;
    states.displacements.resize(n_nodes, n_samples);
    for (int i = 0; i < n_nodes; ++i) {
        for (long j = 0; j < n_samples; ++j) states.displacements(i, j) = rng.uniform(-1.0, 1.0);
        states.node_labels.push_back("node_" + std::to_string(i + 1));
    }
    states.times.resize(static_cast<size_t>(n_samples));
    for (long j = 0; j < n_samples; ++j) states.times[static_cast<size_t>(j)] = j / fs;
    return states;
}

Eigen::VectorXd oracle_fit_predict(const StateTrajectory& states, const Eigen::VectorXd& target) {
    std::vector<std::vector<double>> design(static_cast<size_t>(states.n_samples()));
    for (long k = 0; k < states.n_samples(); ++k) {
        design[static_cast<size_t>(k)].push_back(1.0);
        for (int i = 0; i < states.n_nodes(); ++i) {
            design[static_cast<size_t>(k)].push_back(states.displacements(i, k));
        }
    }
    std::vector<double> y(target.data(), target.data() + target.size());
    const std::vector<double> w = oracle::least_squares(design, y);
    Eigen::VectorXd pred(states.n_samples());
    for (long k = 0; k < states.n_samples(); ++k) {
        double acc = w[0];
        for (int i = 0; i < states.n_nodes(); ++i) {
            acc += w[static_cast<size_t>(i) + 1] * states.displacements(i, k);
        }
        pred(k) = acc;
    }
    return pred;
}

} // namespace

TEST_CASE("a target equal to one node is reproduced exactly") {
    StateTrajectory states = random_states(6, 200, 11);
    const Eigen::VectorXd target = states.displacements.row(3).transpose();
    const ReadoutWeights weights = train_readout(states, target);
    const Eigen::VectorXd pred = predict(weights, states);
    CHECK(nmse(target, pred) < 1e-10);
}

TEST_CASE("bias absorbs a constant target") {
    StateTrajectory states = random_states(4, 150, 12);
    const Eigen::VectorXd target = Eigen::VectorXd::Constant(150, 3.25);
    const ReadoutWeights weights = train_readout(states, target);
    const Eigen::VectorXd pred = predict(weights, states);
    CHECK(pred.mean() == doctest::Approx(3.25).epsilon(1e-9));
}

TEST_CASE("solver matches the normal-equations oracle") {
    oracle::Rng rng(13);
    const auto target_data = rng.series(200);
    Eigen::VectorXd target(200);
    for (int i = 0; i < 200; ++i) target(i) = target_data[static_cast<size_t>(i)];

    StateTrajectory states = random_states(5, 200, 14);
    const ReadoutWeights weights = train_readout(states, target, 0.0);
    const Eigen::VectorXd pred = predict(weights, states);
    const Eigen::VectorXd oracle_pred = oracle_fit_predict(states, target);
    CHECK((pred - oracle_pred).cwiseAbs().maxCoeff() <=
          1e-8 * std::max(1.0, oracle_pred.cwiseAbs().maxCoeff()));
}

TEST_CASE("fits match the oracle over many random instances") {
    for (uint64_t seed = 0; seed < 100; ++seed) {
        oracle::Rng rng(900 + seed);
        const int n_nodes = 2 + static_cast<int>(rng.next() % 8);
        const long n_samples = 30 + static_cast<long>(rng.next() % 170);
        StateTrajectory states = random_states(n_nodes, n_samples, 5000 + seed);
        Eigen::VectorXd target(n_samples);
        for (long i = 0; i < n_samples; ++i) target(i) = rng.uniform(-2.0, 2.0);

        const Eigen::VectorXd pred = predict(train_readout(states, target), states);
        const Eigen::VectorXd oracle_pred = oracle_fit_predict(states, target);
        REQUIRE((pred - oracle_pred).cwiseAbs().maxCoeff() <=
                1e-8 * std::max(1.0, oracle_pred.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("duplicate nodes trip the rank-deficiency flag, not an error") {
    StateTrajectory states = random_states(3, 100, 15);
    states.displacements.row(2) = states.displacements.row(1);
    const ReadoutWeights weights = train_readout(states, states.displacements.row(0).transpose());
    CHECK(weights.rank_deficient);
    CHECK(weights.weights.allFinite());
}

TEST_CASE("dimension mismatches are rejected") {
    StateTrajectory states = random_states(3, 100, 16);
    CHECK_THROWS_AS(train_readout(states, Eigen::VectorXd::Zero(99)), DimensionError);
    ReadoutWeights wrong;
    wrong.weights = Eigen::VectorXd::Zero(5);
    CHECK_THROWS_AS(predict(wrong, states), DimensionError);
}

TEST_CASE("predict applies the affine map") {
    StateTrajectory states = random_states(3, 50, 17);
    ReadoutWeights weights;
    weights.bias = 2.5;
    weights.weights = Eigen::VectorXd::Zero(3);
    CHECK((predict(weights, states).array() == 2.5).all());

    weights.weights << 0.0, 1.0, 0.0; // pick node 2
    weights.bias = 0.0;
    CHECK(predict(weights, states) == Eigen::VectorXd(states.displacements.row(1).transpose()));

    weights.weights << 0.5, -1.0, 2.0;
    weights.bias = 0.25;
    const Eigen::VectorXd expected =
        (states.displacements.transpose() * weights.weights).array() + 0.25;
    CHECK(predict(weights, states) == expected);
}

TEST_CASE("split cuts contiguous washout/train/test windows") {
    const long total = 1200;
    StateTrajectory states = random_states(2, total, 18);
    Eigen::VectorXd ramp(total);
    for (long i = 0; i < total; ++i) ramp(i) = static_cast<double>(i);

    SplitSpec spec; // 600/300/300
    const TrainTestSplit w = split(states, ramp, spec);
    CHECK(w.train_states.n_samples() == 300);
    CHECK(w.test_states.n_samples() == 300);
    CHECK(w.train_target(0) == 600.0);
    CHECK(w.train_target(299) == 899.0);
    CHECK(w.test_target(0) == 900.0);
    CHECK(w.test_target(299) == 1199.0);
    CHECK(w.train_states.displacements == states.displacements.middleCols(600, 300));

    SplitSpec pass{0, total, 0};
    const TrainTestSplit all = split(states, ramp, pass);
    CHECK(all.train_states.n_samples() == total);
    CHECK(all.test_states.n_samples() == 0);

    SplitSpec bad{1000, 300, 300};
    CHECK_THROWS_AS(split(states, ramp, bad), ConfigError);
}

TEST_CASE("training residual is orthogonal to the regressors") {
    StateTrajectory states = random_states(6, 250, 19);
    oracle::Rng rng(20);
    Eigen::VectorXd target(250);
    for (long i = 0; i < 250; ++i) target(i) = rng.uniform(-1.0, 1.0);

    const ReadoutWeights weights = train_readout(states, target);
    const Eigen::VectorXd residual = target - predict(weights, states);
    const double scale = target.norm();
    CHECK(std::abs(residual.sum()) <= 1e-6 * scale * std::sqrt(250.0));
    for (int i = 0; i < 6; ++i) {
        const Eigen::VectorXd col = states.displacements.row(i).transpose();
        CHECK(std::abs(residual.dot(col)) <= 1e-6 * scale * col.norm());
    }
}

TEST_CASE("full state training error never exceeds the one-feature baseline") {
    SampledSignal input;
    input.times.resize(400);
    input.values.resize(1, 400);
    oracle::Rng rng(21);
    for (long i = 0; i < 400; ++i) {
        input.times[static_cast<size_t>(i)] = i / 60.0;
        input.values(0, i) = rng.uniform(-1.0, 1.0);
    }
    StateTrajectory states = random_states(5, 400, 22);
    states.displacements.row(0) = input.values.row(0); // baseline feature is nested
    Eigen::VectorXd target(400);
    for (long i = 0; i < 400; ++i) target(i) = rng.uniform(-1.0, 1.0);

    const double full = nmse(target, predict(train_readout(states, target), states));
    const ReadoutWeights baseline = baseline_input_regression(input, states.times, target);
    const double base = nmse(target, predict(baseline, signal_as_states(input, states.times)));
    CHECK(full <= base + 1e-12);
}

TEST_CASE("training error is non-decreasing in the ridge") {
    StateTrajectory states = random_states(5, 300, 23);
    oracle::Rng rng(24);
    Eigen::VectorXd target(300);
    for (long i = 0; i < 300; ++i) target(i) = rng.uniform(-1.0, 1.0);

    double last = -1.0;
    for (double ridge : {0.0, 1e-6, 1e-3, 1e-1, 1.0, 10.0}) {
        const double err = nmse(target, predict(train_readout(states, target, ridge), states));
        CHECK(err >= last - 1e-12);
        last = err;
    }
}

TEST_CASE("baseline recovers an affine function of the input") {
    SampledSignal input;
    input.times.resize(100);
    input.values.resize(1, 100);
    oracle::Rng rng(25);
    for (long i = 0; i < 100; ++i) {
        input.times[static_cast<size_t>(i)] = i / 60.0;
        input.values(0, i) = rng.uniform(-1.0, 1.0);
    }
    Eigen::VectorXd target = 2.0 * input.values.row(0).transpose();
    target.array() += 3.0;

    const ReadoutWeights weights = baseline_input_regression(input, input.times, target);
    CHECK(weights.bias == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(weights.weights(0) == doctest::Approx(2.0).epsilon(1e-9));

    const Eigen::VectorXd constant = Eigen::VectorXd::Constant(100, 7.0);
    const ReadoutWeights flat = baseline_input_regression(input, input.times, constant);
    const Eigen::VectorXd pred = predict(flat, signal_as_states(input, input.times));
    CHECK(pred.mean() == doctest::Approx(7.0).epsilon(1e-9));
}

TEST_CASE("weights CSV round trip") {
    ReadoutWeights weights;
    weights.bias = -0.75;
    weights.weights.resize(4);
    weights.weights << 1.0, -2.5, 0.125, 1e-17;

    const fs::path dir = fs::temp_directory_path() / "reskit_readout_tests";
    fs::create_directories(dir);
    const fs::path path = dir / "weights.csv";
    export_weights(weights, path);
    const ReadoutWeights back = import_weights(path);
    CHECK(back.bias == weights.bias);
    CHECK(back.weights == weights.weights);

    std::ofstream(dir / "bad.csv") << "idx,w\n0,1\n";
    CHECK_THROWS_AS(import_weights(dir / "bad.csv"), ConfigError);
    std::ofstream(dir / "gap.csv") << "index,weight\n0,1\n2,3\n";
    CHECK_THROWS_AS(import_weights(dir / "gap.csv"), ConfigError);
}
