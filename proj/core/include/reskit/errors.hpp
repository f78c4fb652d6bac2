#pragma once

#include <stdexcept>
#include <string>

namespace reskit {

/// Base class for all reskit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration or argument values (non-finite parameters, empty
/// module lists, bad split windows, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Dimension mismatch between related containers (states vs. target length,
/// weights vs. node count, ...).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Numerical blow-up detected during integration or recursion. Carries the
/// first offending step index and the simulation time at that step.
class InstabilityError : public Error {
public:
    InstabilityError(const std::string& msg, long step, double time)
        : Error(msg), step_(step), time_(time) {}

    long step() const { return step_; }
    double time() const { return time_; }

private:
    long step_ = -1;
    double time_ = 0.0;
};

/// Trajectory file rejected during import. `kind()` distinguishes the
/// failure modes so callers can react to each one separately.
class TrajectoryError : public Error {
public:
    enum class Kind {
        Io,
        MalformedHeader,
        RowLengthMismatch,
        NonMonotonicTime,
        NonUniformTime,
        NonFiniteValue,
        BadNumber,
    };

    TrajectoryError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Metric preconditions violated (constant target, zero-variance node, ...).
class MetricError : public Error {
public:
    using Error::Error;
};

} // namespace reskit
