#pragma once

#include "reskit/signals.hpp"

#include <Eigen/Dense>

namespace reskit {

/// Parameters of the order-N nonlinear autoregressive target family.
/// The constants default to the standard values for this family; they are
/// echoed into reports so every run records the exact recursion used.
struct NarmaParams {
    int order = 10; // N >= 2
    double alpha = 0.3;
    double beta = 0.05;
    double gamma = 1.5;
    double delta = 0.1;

    /// When true, the lagged sum runs over past outputs (the classic
    /// recursion, with coefficient beta). When false, it runs over past
    /// inputs with coefficient 5*beta.
    bool classic = false;

    void validate() const;
};

/// Generate the order-N target series from a single-channel input.
///
/// The raw input is affinely mapped into [0, 0.5] before the recursion using
/// a running min/max, which keeps the generator causal: truncating the input
/// to its first k samples reproduces the first k target samples exactly. A
/// constant input (including zero) maps to zero.
///
/// For N = 2:  y(t+1) = 0.4*y(t) + 0.4*y(t)*y(t-1) + 0.6*u(t)^3 + 0.1
/// For N > 2:  y(t+1) = a*y(t) + 5b*y(t)*sum_{j=0}^{N-1} u(t-j)
///                      + g*u(t-N+1)*u(t) + d
/// (with the sum over outputs instead of inputs, coefficient b, when
/// `classic` is set). The first N samples are zero; the output has the same
/// length as the input.
///
/// Throws InstabilityError citing N and the step index if |y| exceeds 1e6.
Eigen::VectorXd narma_target(const Eigen::VectorXd& input, const NarmaParams& params);

/// Convenience overload for a single-channel sampled signal.
Eigen::VectorXd narma_target(const SampledSignal& input, const NarmaParams& params);

} // namespace reskit
