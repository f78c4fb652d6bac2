#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reskit/errors.hpp"
#include "reskit/narma.hpp"
#include "reskit/signals.hpp"

#include "../oracles.hpp"

#include <cmath>
#include <numbers>

using namespace reskit;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("triple harmonic basics") {
    const SampledSignal sig = triple_harmonic(2.5, 1.0, 600.0);
    CHECK(sig.values(0, 0) == 0.0); // sin(0) = 0

    const SampledSignal zero = triple_harmonic(0.0, 1.0, 600.0);
    CHECK(zero.values.cwiseAbs().maxCoeff() == 0.0);

    // Direct scalar evaluation at t = 0.1 s.
    const double t = 0.1;
    const double expected = 2.5 * std::sin(kTwoPi * 2.11 * t) * std::sin(kTwoPi * 3.73 * t) *
                            std::sin(kTwoPi * 4.33 * t);
    const long k = 60; // 0.1 s at 600 Hz
    CHECK(sig.times[k] == doctest::Approx(0.1));
    CHECK(sig.values(0, k) == doctest::Approx(expected).epsilon(1e-12));

    CHECK_THROWS_AS(triple_harmonic(1.0, 1.0, 5.0), ConfigError); // under-sampled
}

TEST_CASE("single harmonic basics") {
    const SampledSignal sig = single_harmonic(1.5, 4.0, 1.0, 600.0);
    CHECK(sig.values(0, 0) == 0.0);
    CHECK(single_harmonic(0.0, 4.0, 1.0, 600.0).values.cwiseAbs().maxCoeff() == 0.0);
    const long k = 30; // t = 0.05 s
    CHECK(sig.values(0, k) == doctest::Approx(1.5 * std::sin(kTwoPi * 4.0 * 0.05)).epsilon(1e-12));
}

TEST_CASE("pwm3 slot timing matches the 0.1/0.2 pattern") {
    const double fs = 600.0;
    const SampledSignal sig = pwm3(0.1, 0.2, 1.0, 2.0, fs);
    REQUIRE(sig.n_channels() == 3);

    auto value = [&](int ch, double t) { return sig.values(ch, std::lround(t * fs)); };
    // cycle length 0.9 s; channel c high on [0.3c, 0.3c + 0.1)
    CHECK(value(0, 0.05) == 1.0);
    CHECK(value(0, 0.15) == 0.0);
    CHECK(value(1, 0.35) == 1.0);
    CHECK(value(1, 0.15) == 0.0);
    CHECK(value(2, 0.65) == 1.0);
    CHECK(value(0, 0.95) == 1.0); // second cycle
}

TEST_CASE("pwm3 duty cycle is on/(3(on+off))") {
    const SampledSignal sig = pwm3(0.1, 0.2, 1.0, 9.0, 600.0);
    for (int c = 0; c < 3; ++c) {
        const double duty = sig.values.row(c).mean();
        CHECK(duty == doctest::Approx(1.0 / 9.0).epsilon(0.02));
    }
}

TEST_CASE("pwm3 channels never overlap") {
    const SampledSignal sig = pwm3(0.05, 0.1, 2.0, 3.0, 1200.0);
    for (long k = 0; k < sig.n_samples(); ++k) {
        CHECK(sig.values(0, k) * sig.values(1, k) == 0.0);
        CHECK(sig.values(0, k) * sig.values(2, k) == 0.0);
        CHECK(sig.values(1, k) * sig.values(2, k) == 0.0);
        int high = 0;
        for (int c = 0; c < 3; ++c) high += sig.values(c, k) != 0.0 ? 1 : 0;
        CHECK(high <= 1);
    }
    CHECK_THROWS_AS(pwm3(0.001, 0.0, 1.0, 1.0, 100.0), ConfigError); // pulses unresolvable
}

TEST_CASE("order-2 recursion reproduces the hand sequence") {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(8);
    NarmaParams params;
    params.order = 2;
    const Eigen::VectorXd y = narma_target(u, params);

    // Hand recursion: y(t+1) = 0.4 y(t) + 0.4 y(t) y(t-1) + 0.6 u^3 + 0.1
    double y0 = 0.0, y1 = 0.0;
    const double y2 = 0.4 * y1 + 0.4 * y1 * y0 + 0.1;
    const double y3 = 0.4 * y2 + 0.4 * y2 * y1 + 0.1;
    const double y4 = 0.4 * y3 + 0.4 * y3 * y2 + 0.1;

    CHECK(y(0) == 0.0);
    CHECK(y(1) == 0.0);
    CHECK(y(2) == y2);
    CHECK(y(3) == y3);
    CHECK(y(4) == y4);
    CHECK(y(2) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(y(3) == doctest::Approx(0.14).epsilon(1e-15));
    CHECK(y(4) == doctest::Approx(0.1616).epsilon(1e-15));
}

TEST_CASE("zero-input fixed point is delta/(1-alpha)") {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(300);
    NarmaParams params;
    params.order = 10;
    const Eigen::VectorXd y = narma_target(u, params);
    CHECK(std::abs(y(250) - 0.1 / 0.7) < 1e-9);
}

TEST_CASE("classic variant settles at its quadratic fixed point") {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(2000);
    NarmaParams params;
    params.order = 10;
    params.classic = true;
    const Eigen::VectorXd y = narma_target(u, params);
    // y = a y + b N y^2 + d with a=0.3, bN=0.5, d=0.1
    const double fixed_point = (0.7 - std::sqrt(0.49 - 4.0 * 0.5 * 0.1)) / (2.0 * 0.5);
    CHECK(std::abs(y(1999) - fixed_point) < 1e-9);
}

TEST_CASE("target length always equals input length") {
    for (int n : {5, 37, 400}) {
        for (int order : {2, 5, 12, 20}) {
            NarmaParams params;
            params.order = order;
            CHECK(narma_target(Eigen::VectorXd::Zero(n), params).size() == n);
        }
    }
    Eigen::VectorXd u(123);
    for (int i = 0; i < 123; ++i) u(i) = std::sin(0.4 * i);
    for (int order : {2, 5}) {
        NarmaParams params;
        params.order = order;
        CHECK(narma_target(u, params).size() == 123);
    }
}

TEST_CASE("generator is causal under truncation") {
    oracle::Rng rng(42);
    const auto data = rng.series(500);
    Eigen::VectorXd u(500);
    for (int i = 0; i < 500; ++i) u(i) = data[static_cast<size_t>(i)];

    for (int order : {2, 10}) {
        NarmaParams params;
        params.order = order;
        const Eigen::VectorXd full = narma_target(u, params);
        for (long k : {3L, 57L, 200L}) {
            const Eigen::VectorXd partial = narma_target(Eigen::VectorXd(u.head(k)), params);
            for (long i = 0; i < k; ++i) CHECK(partial(i) == full(i));
        }
    }
}

TEST_CASE("order-2 target stays bounded over long random inputs") {
    // The order-2 recursion contracts for |y| < 1 with inputs in [0, 0.5],
    // so it stays small over any horizon.
    NarmaParams params;
    params.order = 2;
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        oracle::Rng rng(seed);
        const auto data = rng.series(100000);
        Eigen::VectorXd u(static_cast<long>(data.size()));
        for (size_t i = 0; i < data.size(); ++i) u(static_cast<long>(i)) = data[i];
        const Eigen::VectorXd y = narma_target(u, params);
        CHECK(y.cwiseAbs().maxCoeff() < 10.0);
    }
}

TEST_CASE("order-10 target stays tame over the experiment horizon") {
    // The input-sum recursion at order 10 is only conditionally stable: the
    // growth factor alpha + 5*beta*sum(u) crosses 1 whenever the rescaled
    // input dwells near its ceiling. Over the 1200-sample protocol window it
    // must stay finite, and within two decades of its fixed point after the
    // 600-sample washout.
    NarmaParams params;
    params.order = 10;
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        oracle::Rng rng(seed);
        const double p1 = rng.uniform(0.0, 6.28);
        const double p2 = rng.uniform(0.0, 6.28);
        const double p3 = rng.uniform(0.0, 6.28);
        Eigen::VectorXd u(1200);
        for (long k = 0; k < 1200; ++k) {
            const double t = static_cast<double>(k) / 60.0;
            u(k) = std::sin(kTwoPi * 2.11 * t + p1) * std::sin(kTwoPi * 3.73 * t + p2) *
                   std::sin(kTwoPi * 4.33 * t + p3);
        }
        const Eigen::VectorXd y = narma_target(u, params);
        CHECK(y.allFinite());
        CHECK(y.tail(600).cwiseAbs().maxCoeff() < 100.0);
    }
}

TEST_CASE("divergent parameters raise an instability error") {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(5000);
    NarmaParams params;
    params.order = 5;
    params.alpha = 1.5;
    try {
        narma_target(u, params);
        FAIL("expected InstabilityError");
    } catch (const InstabilityError& e) {
        CHECK(e.step() > 0);
        CHECK(std::string(e.what()).find("narma-5") != std::string::npos);
    }
}

TEST_CASE("generators are pure functions") {
    const SampledSignal a = triple_harmonic(0.4, 2.0, 600.0);
    const SampledSignal b = triple_harmonic(0.4, 2.0, 600.0);
    CHECK(a.values == b.values);

    oracle::Rng rng(7);
    const auto data = rng.series(256);
    Eigen::VectorXd u(256);
    for (int i = 0; i < 256; ++i) u(i) = data[static_cast<size_t>(i)];
    NarmaParams params;
    CHECK(narma_target(u, params) == narma_target(u, params));
}

TEST_CASE("make_signal dispatches on the spec kind") {
    SignalSpec spec;
    spec.kind = SignalKind::TripleHarmonic;
    spec.amplitude = 0.4;
    spec.duration_s = 1.0;
    spec.sample_rate = 600.0;
    CHECK(make_signal(spec).n_channels() == 1);

    spec.kind = SignalKind::SingleHarmonic;
    spec.frequencies_hz = {4.0};
    CHECK(make_signal(spec).n_channels() == 1);
    spec.frequencies_hz = {4.0, 5.0};
    CHECK_THROWS_AS(make_signal(spec), ConfigError);

    spec.kind = SignalKind::Pwm3;
    spec.frequencies_hz = {4.0};
    CHECK(make_signal(spec).n_channels() == 3);

    spec.kind = SignalKind::SingleHarmonic;
    spec.frequencies_hz = {-1.0};
    CHECK_THROWS_AS(make_signal(spec), ConfigError);
}

TEST_CASE("piecewise constant target") {
    const Eigen::VectorXd two = piecewise_constant_target({{0.0, 5.0}, {170.0, 5.0}}, 60.0);
    REQUIRE(two.size() == 600);
    CHECK(two(0) == 0.0);
    CHECK(two(299) == 0.0);
    CHECK(two(300) == 170.0);
    CHECK(two(599) == 170.0);

    const Eigen::VectorXd flat = piecewise_constant_target({{42.0, 1.0}}, 60.0);
    CHECK(flat.minCoeff() == 42.0);
    CHECK(flat.maxCoeff() == 42.0);

    const Eigen::VectorXd orient =
        piecewise_constant_target({{-1.0, 5.0}, {0.0, 5.0}, {1.0, 5.0}}, 60.0);
    CHECK(orient(0) == -1.0);
    CHECK(orient(449) == 0.0);
    CHECK(orient(899) == 1.0);

    CHECK_THROWS_AS(piecewise_constant_target({{1.0, -2.0}}, 60.0), ConfigError);
}
