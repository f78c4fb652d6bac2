#include "reskit/trajectory.hpp"

#include "reskit/csv.hpp"
#include "reskit/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace reskit {

double StateTrajectory::sample_rate() const {
    if (times.size() < 2) throw ConfigError("trajectory needs >= 2 samples for a sample rate");
    return 1.0 / (times[1] - times[0]);
}

StateTrajectory StateTrajectory::slice(long start, long count) const {
    if (start < 0 || count < 0 || start + count > n_samples()) {
        throw DimensionError("trajectory slice [" + std::to_string(start) + ", " +
                             std::to_string(start + count) + ") outside 0.." +
                             std::to_string(n_samples()));
    }
    StateTrajectory out;
    out.times.assign(times.begin() + start, times.begin() + start + count);
    out.displacements = displacements.middleCols(start, count);
    out.node_labels = node_labels;
    return out;
}

void StateTrajectory::validate() const {
    if (static_cast<long>(node_labels.size()) != displacements.rows()) {
        throw TrajectoryError(TrajectoryError::Kind::RowLengthMismatch,
                              "node_labels count does not match displacement rows");
    }
    if (static_cast<long>(times.size()) != displacements.cols()) {
        throw TrajectoryError(TrajectoryError::Kind::RowLengthMismatch,
                              "times count does not match displacement columns");
    }
    for (size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) {
            throw TrajectoryError(TrajectoryError::Kind::NonMonotonicTime,
                                  "times not strictly increasing at sample " + std::to_string(k));
        }
    }
    if (times.size() >= 3) {
        const double dt0 = times[1] - times[0];
        for (size_t k = 2; k < times.size(); ++k) {
            const double dt = times[k] - times[k - 1];
            if (std::abs(dt - dt0) > 1e-9 * dt0) {
                throw TrajectoryError(TrajectoryError::Kind::NonUniformTime,
                                      "non-uniform sample spacing at sample " + std::to_string(k));
            }
        }
    }
    for (long i = 0; i < displacements.rows(); ++i) {
        for (long j = 0; j < displacements.cols(); ++j) {
            if (!std::isfinite(displacements(i, j))) {
                throw TrajectoryError(TrajectoryError::Kind::NonFiniteValue,
                                      "non-finite displacement at row " + std::to_string(i) +
                                          ", column " + std::to_string(j));
            }
        }
    }
}

StateTrajectory import_trajectory(const std::filesystem::path& path, TrajectoryFormat format) {
    (void)format; // only CSV for now
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw TrajectoryError(TrajectoryError::Kind::Io, "cannot open " + path.string());
    }

    std::string header;
    if (!std::getline(in, header)) {
        throw TrajectoryError(TrajectoryError::Kind::MalformedHeader, "empty file " + path.string());
    }
    auto head_fields = csv::split_line(header);
    if (head_fields.size() < 2 || head_fields[0] != "time") {
        throw TrajectoryError(TrajectoryError::Kind::MalformedHeader,
                              "header must be 'time,<node_0>,...', got '" + header + "'");
    }

    StateTrajectory traj;
    traj.node_labels.assign(head_fields.begin() + 1, head_fields.end());
    const size_t n_nodes = traj.node_labels.size();

    std::vector<std::vector<double>> columns; // one entry per sample, n_nodes values
    std::string line;
    size_t row_idx = 0;
    while (std::getline(in, line)) {
        ++row_idx;
        if (line.empty() && in.eof()) break;
        auto fields = csv::split_line(line);
        if (fields.size() != n_nodes + 1) {
            throw TrajectoryError(TrajectoryError::Kind::RowLengthMismatch,
                                  "row " + std::to_string(row_idx) + " has " +
                                      std::to_string(fields.size()) + " fields, expected " +
                                      std::to_string(n_nodes + 1));
        }
        std::vector<double> values(n_nodes + 1);
        for (size_t c = 0; c < fields.size(); ++c) {
            try {
                values[c] = csv::parse_double(fields[c]);
            } catch (const ConfigError&) {
                throw TrajectoryError(TrajectoryError::Kind::BadNumber,
                                      "unparseable number at row " + std::to_string(row_idx) +
                                          ", column " + std::to_string(c));
            }
            if (!std::isfinite(values[c])) {
                throw TrajectoryError(TrajectoryError::Kind::NonFiniteValue,
                                      "non-finite value at row " + std::to_string(row_idx) +
                                          ", column " + std::to_string(c));
            }
        }
        traj.times.push_back(values[0]);
        values.erase(values.begin());
        columns.push_back(std::move(values));
    }

    traj.displacements.resize(static_cast<long>(n_nodes), static_cast<long>(columns.size()));
    for (size_t j = 0; j < columns.size(); ++j) {
        for (size_t i = 0; i < n_nodes; ++i) {
            traj.displacements(static_cast<long>(i), static_cast<long>(j)) = columns[j][i];
        }
    }

    traj.validate();
    return traj;
}

void export_trajectory(const StateTrajectory& trajectory, const std::filesystem::path& path,
                       TrajectoryFormat format) {
    (void)format;
    trajectory.validate();

    std::ostringstream out;
    std::vector<std::string> header;
    header.reserve(trajectory.node_labels.size() + 1);
    header.emplace_back("time");
    for (const auto& label : trajectory.node_labels) header.push_back(label);
    out << csv::join_line(header);

    std::vector<std::string> row(trajectory.node_labels.size() + 1);
    for (long j = 0; j < trajectory.n_samples(); ++j) {
        row[0] = csv::format_double(trajectory.times[static_cast<size_t>(j)]);
        for (long i = 0; i < trajectory.n_nodes(); ++i) {
            row[static_cast<size_t>(i) + 1] = csv::format_double(trajectory.displacements(i, j));
        }
        out << csv::join_line(row);
    }

    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw TrajectoryError(TrajectoryError::Kind::Io, "cannot write " + path.string());
    }
    file << out.str();
}

} // namespace reskit
