#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reskit/errors.hpp"
#include "reskit/metrics.hpp"
#include "reskit/spectrum.hpp"

#include "../oracles.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

using namespace reskit;

namespace {

Eigen::VectorXd to_vec(const std::vector<double>& v) {
    Eigen::VectorXd out(static_cast<long>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) out(static_cast<long>(i)) = v[i];
    return out;
}

Eigen::VectorXd test_signal(uint64_t seed, long n = 256) {
    oracle::Rng rng(seed);
    Eigen::VectorXd out(n);
    for (long k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / 60.0;
        out(k) = std::sin(2.0 * std::numbers::pi * 3.0 * t) +
                 0.5 * std::sin(2.0 * std::numbers::pi * 7.5 * t) +
                 0.3 * std::sin(2.0 * std::numbers::pi * 12.0 * t) + 0.1 * rng.uniform(-1.0, 1.0);
    }
    return out;
}

} // namespace

TEST_CASE("nmse endpoints and hand value") {
    const Eigen::VectorXd y = to_vec({1.0, 2.0, 3.0});
    CHECK(nmse(y, y) == 0.0);

    const Eigen::VectorXd mean_pred = Eigen::VectorXd::Constant(3, 2.0);
    CHECK(nmse(y, mean_pred) == doctest::Approx(1.0));

    const Eigen::VectorXd yhat = to_vec({1.0, 2.0, 4.0});
    CHECK(nmse(y, yhat) == doctest::Approx(0.5));

    CHECK_THROWS_AS(nmse(Eigen::VectorXd::Constant(5, 2.0), Eigen::VectorXd::Zero(5)), MetricError);
    CHECK_THROWS_AS(nmse(y, Eigen::VectorXd::Zero(4)), DimensionError);
}

TEST_CASE("nmse is invariant under affine maps of both series") {
    const Eigen::VectorXd y = test_signal(31, 200);
    const Eigen::VectorXd yhat = test_signal(32, 200);
    const double base = nmse(y, yhat);
    for (double a : {2.0, -0.5, 1e3}) {
        for (double b : {0.0, -7.0, 0.3}) {
            const Eigen::VectorXd ys = (a * y.array() + b).matrix();
            const Eigen::VectorXd yhs = (a * yhat.array() + b).matrix();
            CHECK(std::abs(nmse(ys, yhs) - base) <= 1e-12 * base);
        }
    }
}

TEST_CASE("mse endpoints and hand value") {
    const Eigen::VectorXd y = to_vec({1.0, 2.0, 3.0});
    CHECK(mse(y, y) == 0.0);
    const Eigen::VectorXd yhat = to_vec({1.0, 2.0, 4.0});
    CHECK(mse(y, yhat) == doctest::Approx(1.0 / 3.0));
    const Eigen::VectorXd shifted = (y.array() + 2.0).matrix();
    CHECK(mse(y, shifted) == doctest::Approx(4.0));
}

TEST_CASE("psi endpoints") {
    const Eigen::VectorXd y = test_signal(33);
    const PsiReport perfect = psi(y, y, 60.0);
    CHECK(perfect.psi == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(perfect.occupancy.size() == 8);

    const PsiReport nothing = psi(y, Eigen::VectorXd::Zero(y.size()), 60.0);
    CHECK(nothing.psi == 0.0);

    const PsiReport half = psi(y, Eigen::VectorXd(0.5 * y), 60.0);
    for (double occ : half.occupancy) CHECK(occ == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(half.psi == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("psi occupancies stay in range and clamp on overshoot") {
    const Eigen::VectorXd y = test_signal(34);
    const Eigen::VectorXd loud = 2.0 * y;
    const PsiReport clamped = psi(y, loud, 60.0);
    for (double occ : clamped.occupancy) {
        CHECK(occ >= 0.0);
        CHECK(occ <= 1.0);
    }
    CHECK(clamped.psi == doctest::Approx(8.0).epsilon(1e-9));

    const PsiReport raw = psi(y, loud, 60.0, 8, false);
    CHECK(raw.psi == doctest::Approx(16.0).epsilon(1e-9));
}

TEST_CASE("psi is invariant to joint amplitude scaling") {
    const Eigen::VectorXd y = test_signal(35);
    const Eigen::VectorXd yhat = test_signal(36);
    const double base = psi(y, yhat, 60.0).psi;
    for (double a : {0.1, 3.0, 250.0}) {
        CHECK(psi(Eigen::VectorXd(a * y), Eigen::VectorXd(a * yhat), 60.0).psi ==
              doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("psi flags a degenerate spectrum and pads to n_peaks") {
    // A pure sinusoid has a single spectral peak.
    Eigen::VectorXd y(256);
    for (long k = 0; k < 256; ++k) {
        y(k) = std::sin(2.0 * std::numbers::pi * 5.0 * static_cast<double>(k) / 60.0);
    }
    const PsiReport report = psi(y, y, 60.0);
    CHECK(report.degenerate_spectrum);
    CHECK(report.occupancy.size() == 8);
    CHECK(report.psi == doctest::Approx(8.0).epsilon(1e-12));

    CHECK_THROWS_AS(psi(Eigen::VectorXd::Zero(8), Eigen::VectorXd::Zero(8), 60.0), MetricError);
}

TEST_CASE("psi matches the brute-force oracle") {
    for (uint64_t seed = 50; seed < 60; ++seed) {
        const Eigen::VectorXd y = test_signal(seed, 300);
        const Eigen::VectorXd yhat = test_signal(seed + 1000, 300);
        const std::vector<double> yv(y.data(), y.data() + y.size());
        const std::vector<double> pv(yhat.data(), yhat.data() + yhat.size());
        CHECK(psi(y, yhat, 60.0).psi == doctest::Approx(oracle::psi(yv, pv)).epsilon(1e-8));
    }
}

TEST_CASE("correlation matrix endpoints") {
    StateTrajectory states;
    states.displacements.resize(3, 100);
    oracle::Rng rng(37);
    for (long k = 0; k < 100; ++k) states.displacements(0, k) = rng.uniform(-1.0, 1.0);
    states.displacements.row(1) = states.displacements.row(0);
    states.displacements.row(2) = -states.displacements.row(0);
    states.node_labels = {"a", "b", "c"};
    states.times.resize(100);
    for (long k = 0; k < 100; ++k) states.times[static_cast<size_t>(k)] = k / 60.0;

    const CorrelationReport report = correlation_matrix(states);
    CHECK(report.matrix(0, 1) == doctest::Approx(1.0));
    CHECK(report.matrix(0, 2) == doctest::Approx(-1.0));
    CHECK(report.matrix(1, 2) == doctest::Approx(-1.0));
    for (int i = 0; i < 3; ++i) CHECK(report.matrix(i, i) == 1.0);
    CHECK(report.matrix.maxCoeff() <= 1.0);
    CHECK(report.matrix.minCoeff() >= -1.0);
    CHECK(report.matrix == report.matrix.transpose().eval());
    // R_i = [1, 1, -1] rows sums: 1+1-1 = 1, 1, -1 -> avg_ci = 1/3
    CHECK(report.avg_ci == doctest::Approx(1.0 / 3.0));
    CHECK(report.avg_ci_normalized == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("independent series decorrelate") {
    StateTrajectory states;
    const long n = 10000;
    states.displacements.resize(2, n);
    oracle::Rng a(101), b(202);
    for (long k = 0; k < n; ++k) {
        states.displacements(0, k) = a.uniform(-1.0, 1.0);
        states.displacements(1, k) = b.uniform(-1.0, 1.0);
    }
    states.node_labels = {"a", "b"};
    states.times.resize(static_cast<size_t>(n));
    for (long k = 0; k < n; ++k) states.times[static_cast<size_t>(k)] = k / 60.0;
    CHECK(std::abs(correlation_matrix(states).matrix(0, 1)) < 0.05);
}

TEST_CASE("zero-variance node is reported by name") {
    StateTrajectory states;
    states.displacements.resize(2, 50);
    oracle::Rng rng(38);
    for (long k = 0; k < 50; ++k) states.displacements(0, k) = rng.uniform(-1.0, 1.0);
    states.displacements.row(1).setConstant(0.123);
    states.node_labels = {"node_1", "node_2"};
    states.times.resize(50);
    for (long k = 0; k < 50; ++k) states.times[static_cast<size_t>(k)] = k / 60.0;
    try {
        correlation_matrix(states);
        FAIL("expected MetricError");
    } catch (const MetricError& e) {
        CHECK(std::string(e.what()).find("node_2") != std::string::npos);
    }
}

TEST_CASE("correlation matrix is positive semidefinite and matches the oracle") {
    StateTrajectory states;
    const int n = 6;
    const long t = 400;
    states.displacements.resize(n, t);
    oracle::Rng rng(39);
    std::vector<std::vector<double>> rows(n, std::vector<double>(static_cast<size_t>(t)));
    for (int i = 0; i < n; ++i) {
        for (long k = 0; k < t; ++k) {
            const double v = rng.uniform(-1.0, 1.0) + 0.3 * std::sin(0.01 * static_cast<double>(k * (i + 1)));
            states.displacements(i, k) = v;
            rows[static_cast<size_t>(i)][static_cast<size_t>(k)] = v;
        }
        states.node_labels.push_back("n" + std::to_string(i));
    }
    states.times.resize(static_cast<size_t>(t));
    for (long k = 0; k < t; ++k) states.times[static_cast<size_t>(k)] = k / 60.0;

    const CorrelationReport report = correlation_matrix(states);
    const auto expected = oracle::correlation(rows);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            CHECK(report.matrix(i, j) ==
                  doctest::Approx(expected[static_cast<size_t>(i)][static_cast<size_t>(j)])
                      .epsilon(1e-10));
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(report.matrix);
    CHECK(eigen.eigenvalues().minCoeff() >= -1e-10);

    // R_i row sums and both index variants
    for (int i = 0; i < n; ++i) {
        CHECK(report.node_index(i) == doctest::Approx(report.matrix.row(i).sum()));
    }
    CHECK(report.avg_ci == doctest::Approx(report.node_index.mean()));
    CHECK(report.avg_ci_normalized == doctest::Approx(report.avg_ci / n));
}
