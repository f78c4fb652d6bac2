#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace reskit {

/// Frequencies of the three multiplied harmonics used for the emulation-task
/// base excitation, Hz.
inline constexpr std::array<double, 3> kTripleHarmonicHz = {2.11, 3.73, 4.33};

enum class SignalKind { TripleHarmonic, SingleHarmonic, Pwm3 };

/// Parametric description of an input stream.
struct SignalSpec {
    SignalKind kind = SignalKind::TripleHarmonic;
    double amplitude = 1.0;
    std::vector<double> frequencies_hz{kTripleHarmonicHz.begin(), kTripleHarmonicHz.end()};
    double pwm_on_s = 0.1;
    double pwm_off_s = 0.2;
    double duration_s = 20.0;
    double sample_rate = 3000.0;

    void validate() const;
};

/// Uniformly sampled multichannel signal. Rows are channels.
struct SampledSignal {
    std::vector<double> times;
    Eigen::MatrixXd values; // n_channels x n_samples

    int n_channels() const { return static_cast<int>(values.rows()); }
    long n_samples() const { return static_cast<long>(values.cols()); }
    double sample_rate() const;
    double duration() const { return times.empty() ? 0.0 : times.back(); }

    /// Linear interpolation of one channel at time t; clamps to the end
    /// values outside the sampled range.
    double value_at(int channel, double t) const;

    /// Values of one channel interpolated at the given times.
    Eigen::VectorXd resample(int channel, const std::vector<double>& at_times) const;
};

/// Product of three sinusoids: A * sin(2*pi*f1*t) * sin(2*pi*f2*t) * sin(2*pi*f3*t).
SampledSignal triple_harmonic(double amplitude, double duration_s, double sample_rate,
                              const std::array<double, 3>& frequencies_hz = kTripleHarmonicHz);

/// A * sin(2*pi*f*t).
SampledSignal single_harmonic(double amplitude, double frequency_hz, double duration_s,
                              double sample_rate);

/// Three square-wave channels firing sequentially with no overlap. Channel c
/// is high (value `amplitude`) during [c*(on+off), c*(on+off)+on) within a
/// repeating cycle of length 3*(on+off).
SampledSignal pwm3(double on_s, double off_s, double amplitude, double duration_s,
                   double sample_rate);

/// Step function from (value, duration) segments, sampled uniformly.
Eigen::VectorXd piecewise_constant_target(const std::vector<std::pair<double, double>>& segments,
                                          double sample_rate);

/// Realize a SignalSpec with its stored parameters.
SampledSignal make_signal(const SignalSpec& spec);

} // namespace reskit
