#include "reskit/metrics.hpp"

#include "reskit/errors.hpp"
#include "reskit/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace reskit {

namespace {

void check_pair(const Eigen::VectorXd& target, const Eigen::VectorXd& predicted) {
    if (target.size() != predicted.size()) {
        throw DimensionError("target and predicted lengths differ: " +
                             std::to_string(target.size()) + " vs " +
                             std::to_string(predicted.size()));
    }
    if (target.size() < 2) throw MetricError("need at least 2 samples");
}

} // namespace

double nmse(const Eigen::VectorXd& target, const Eigen::VectorXd& predicted) {
    check_pair(target, predicted);
    const double mean = target.mean();
    const double centered_ss = (target.array() - mean).square().sum();
    if (centered_ss == 0.0) {
        throw MetricError("nmse undefined for a constant target (zero variance)");
    }
    const double residual_ss = (target - predicted).squaredNorm();
    return residual_ss / centered_ss;
}

double mse(const Eigen::VectorXd& target, const Eigen::VectorXd& predicted) {
    check_pair(target, predicted);
    return (target - predicted).squaredNorm() / static_cast<double>(target.size());
}

PsiReport psi(const Eigen::VectorXd& target, const Eigen::VectorXd& predicted,
              double sample_rate, int n_peaks, bool clamp) {
    check_pair(target, predicted);

    const MagnitudeSpectrum target_spec = magnitude_spectrum(target, sample_rate);
    const MagnitudeSpectrum predicted_spec = magnitude_spectrum(predicted, sample_rate);
    if (static_cast<long>(target_spec.magnitudes.size()) < 2 * n_peaks) {
        throw MetricError("signal too short: need at least " + std::to_string(2 * n_peaks) +
                          " spectral bins");
    }

    const PeakSelection peaks = find_spectral_peaks(target_spec.magnitudes, n_peaks, 2);

    PsiReport report;
    report.degenerate_spectrum = peaks.degenerate;
    for (long bin : peaks.bins) {
        const double t_mag = target_spec.magnitudes[static_cast<size_t>(bin)];
        const double p_mag = predicted_spec.magnitudes[static_cast<size_t>(bin)];
        double occ = t_mag > 0.0 ? p_mag / t_mag : 0.0;
        if (clamp) occ = std::min(occ, 1.0);
        report.peak_frequencies.push_back(target_spec.frequencies[static_cast<size_t>(bin)]);
        report.target_magnitudes.push_back(t_mag);
        report.predicted_magnitudes.push_back(p_mag);
        report.occupancy.push_back(occ);
        report.psi += occ;
    }
    return report;
}

CorrelationReport correlation_matrix(const StateTrajectory& states) {
    const int n = states.n_nodes();
    const long t_len = states.n_samples();
    if (t_len < 2) throw MetricError("correlation needs >= 2 samples");

    Eigen::MatrixXd centered = states.displacements;
    Eigen::VectorXd stddev(n);
    for (int i = 0; i < n; ++i) {
        const double mean = centered.row(i).mean();
        centered.row(i).array() -= mean;
        stddev(i) = std::sqrt(centered.row(i).squaredNorm() / static_cast<double>(t_len));
        // Constant rows can leave rounding residue of order eps * |mean|.
        if (stddev(i) <= 1e-12 * std::abs(mean)) {
            const std::string label = static_cast<size_t>(i) < states.node_labels.size()
                                          ? states.node_labels[static_cast<size_t>(i)]
                                          : std::to_string(i);
            throw MetricError("zero-variance node: " + label);
        }
    }

    CorrelationReport report;
    report.matrix = (centered * centered.transpose()) / static_cast<double>(t_len);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            report.matrix(i, j) =
                std::clamp(report.matrix(i, j) / (stddev(i) * stddev(j)), -1.0, 1.0);
        }
        report.matrix(i, i) = 1.0;
    }
    // Enforce exact symmetry against rounding.
    report.matrix = ((report.matrix + report.matrix.transpose()) / 2.0).eval();

    report.node_index = report.matrix.rowwise().sum();
    report.avg_ci = report.node_index.mean();
    report.avg_ci_normalized = report.avg_ci / static_cast<double>(n);
    return report;
}

} // namespace reskit
