#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace reskit {

/// Nodal displacement matrix over time. Rows are nodes, columns are samples;
/// times are uniform at 1/sample_rate.
struct StateTrajectory {
    std::vector<double> times;          // s, strictly increasing, uniform
    Eigen::MatrixXd displacements;      // n_nodes x n_samples, meters
    std::vector<std::string> node_labels;

    int n_nodes() const { return static_cast<int>(displacements.rows()); }
    long n_samples() const { return static_cast<long>(displacements.cols()); }
    double sample_rate() const;

    /// Contiguous sample window [start, start+count).
    StateTrajectory slice(long start, long count) const;

    /// Throws TrajectoryError when any invariant fails: label/row mismatch,
    /// time/column mismatch, non-monotonic or non-uniform times, non-finite
    /// values.
    void validate() const;
};

enum class TrajectoryFormat { Csv };

/// Read a trajectory from disk. Non-uniform timestamps are rejected, never
/// resampled; every defect maps to a distinct TrajectoryError kind.
StateTrajectory import_trajectory(const std::filesystem::path& path,
                                  TrajectoryFormat format = TrajectoryFormat::Csv);

/// Write `time,<node_0>,...` CSV with LF line endings. Values use shortest
/// round-trip formatting, so export/import reproduces the exact doubles.
void export_trajectory(const StateTrajectory& trajectory, const std::filesystem::path& path,
                       TrajectoryFormat format = TrajectoryFormat::Csv);

} // namespace reskit
