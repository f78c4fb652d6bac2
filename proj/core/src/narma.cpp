#include "reskit/narma.hpp"

#include "reskit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace reskit {

namespace {

constexpr double kBlowUp = 1e6;

// Causal [0, 0.5] normalization: each sample is scaled by the min/max seen
// so far. Constant prefixes (and all-constant inputs) map to zero.
Eigen::VectorXd rescale_running(const Eigen::VectorXd& input) {
    Eigen::VectorXd out(input.size());
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (long k = 0; k < input.size(); ++k) {
        const double u = input(k);
        if (!std::isfinite(u)) throw ConfigError("narma input has a non-finite sample");
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        out(k) = (hi > lo) ? 0.5 * (u - lo) / (hi - lo) : 0.0;
    }
    return out;
}

} // namespace

void NarmaParams::validate() const {
    if (order < 2) throw ConfigError("narma order must be >= 2");
    for (double v : {alpha, beta, gamma, delta}) {
        if (!std::isfinite(v)) throw ConfigError("narma constants must be finite");
    }
}

Eigen::VectorXd narma_target(const Eigen::VectorXd& input, const NarmaParams& params) {
    params.validate();
    const long n = input.size();
    const int N = params.order;

    const Eigen::VectorXd u = rescale_running(input);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);

    auto check = [&](long k) {
        if (std::abs(y(k)) > kBlowUp || !std::isfinite(y(k))) {
            throw InstabilityError("narma-" + std::to_string(N) + " recursion diverged at step " +
                                       std::to_string(k),
                                   k, static_cast<double>(k));
        }
    };

    if (N == 2) {
        for (long k = 2; k < n; ++k) {
            const double uk = u(k - 1);
            y(k) = 0.4 * y(k - 1) + 0.4 * y(k - 1) * y(k - 2) + 0.6 * uk * uk * uk + 0.1;
            check(k);
        }
        return y;
    }

    // Sliding lag sum over the previous N samples of u (or of y in classic
    // mode), maintained incrementally.
    double lag_sum = 0.0;
    if (!params.classic) {
        for (long j = 0; j < std::min<long>(N, n); ++j) lag_sum += u(j);
    }
    for (long k = N; k < n; ++k) {
        if (params.classic) {
            lag_sum = 0.0;
            for (int j = 0; j < N; ++j) lag_sum += y(k - 1 - j);
            y(k) = params.alpha * y(k - 1) + params.beta * y(k - 1) * lag_sum +
                   params.gamma * u(k - N) * u(k - 1) + params.delta;
        } else {
            // lag_sum currently covers u(k-N) .. u(k-1)
            y(k) = params.alpha * y(k - 1) + 5.0 * params.beta * y(k - 1) * lag_sum +
                   params.gamma * u(k - N) * u(k - 1) + params.delta;
            if (k + 1 < n) lag_sum += u(k) - u(k - N);
        }
        check(k);
    }
    return y;
}

Eigen::VectorXd narma_target(const SampledSignal& input, const NarmaParams& params) {
    if (input.n_channels() != 1) {
        throw DimensionError("narma input must be single-channel, got " +
                             std::to_string(input.n_channels()) + " channels");
    }
    return narma_target(Eigen::VectorXd(input.values.row(0).transpose()), params);
}

} // namespace reskit
