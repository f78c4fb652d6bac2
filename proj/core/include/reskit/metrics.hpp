#pragma once

#include "reskit/trajectory.hpp"

#include <Eigen/Dense>

#include <vector>

namespace reskit {

/// Residual sum of squares over the centered sum of squares of the target.
/// 0 is perfect; 1 equals predicting the target mean. Throws MetricError on
/// a constant target.
double nmse(const Eigen::VectorXd& target, const Eigen::VectorXd& predicted);

/// Plain mean squared error.
double mse(const Eigen::VectorXd& target, const Eigen::VectorXd& predicted);

/// Spectral peak comparison over the dominant target peaks.
struct PsiReport {
    std::vector<double> peak_frequencies;     // Hz, one per peak
    std::vector<double> target_magnitudes;
    std::vector<double> predicted_magnitudes;
    std::vector<double> occupancy;            // each in [0, 1] when clamped
    double psi = 0.0;                         // sum of occupancies
    bool degenerate_spectrum = false;         // fewer local maxima than peaks
};

/// Peak similarity between target and predicted series: both spectra are
/// Hann-windowed one-sided magnitudes, the `n_peaks` dominant local maxima
/// of the *target* spectrum (>= 2 bins apart) define the peak set, and each
/// occupancy is predicted/target magnitude at that peak. With `clamp` (the
/// default) occupancies cap at 1 so the index lies in [0, n_peaks].
PsiReport psi(const Eigen::VectorXd& target, const Eigen::VectorXd& predicted,
              double sample_rate, int n_peaks = 8, bool clamp = true);

/// Pearson correlation structure across nodal displacement series.
struct CorrelationReport {
    Eigen::MatrixXd matrix;        // n x n, symmetric, unit diagonal
    Eigen::VectorXd node_index;    // R_i: row sums
    double avg_ci = 0.0;           // mean of R_i (scales with n)
    double avg_ci_normalized = 0.0; // avg_ci / n, in [-1, 1]
};

/// Throws MetricError naming the node if any series has zero variance.
CorrelationReport correlation_matrix(const StateTrajectory& states);

} // namespace reskit
