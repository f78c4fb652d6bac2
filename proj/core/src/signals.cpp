#include "reskit/signals.hpp"

#include "reskit/errors.hpp"

#include <cmath>
#include <numbers>

namespace reskit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> uniform_times(double duration_s, double sample_rate) {
    if (duration_s <= 0.0) throw ConfigError("signal duration must be > 0");
    if (sample_rate <= 0.0) throw ConfigError("sample rate must be > 0");
    const long n = static_cast<long>(std::floor(duration_s * sample_rate)) + 1;
    std::vector<double> times(static_cast<size_t>(n));
    for (long k = 0; k < n; ++k) times[static_cast<size_t>(k)] = static_cast<double>(k) / sample_rate;
    return times;
}

} // namespace

void SignalSpec::validate() const {
    if (duration_s <= 0.0) throw ConfigError("signal duration must be > 0");
    if (sample_rate <= 0.0) throw ConfigError("signal sample rate must be > 0");
    for (double f : frequencies_hz) {
        if (!(f > 0.0)) throw ConfigError("signal frequencies must be > 0");
    }
    if (kind == SignalKind::Pwm3) {
        if (!(pwm_on_s > 0.0)) throw ConfigError("pwm_on_s must be > 0");
        if (pwm_off_s < 0.0) throw ConfigError("pwm_off_s must be >= 0");
    }
}

double SampledSignal::sample_rate() const {
    if (times.size() < 2) throw ConfigError("signal needs >= 2 samples for a sample rate");
    return 1.0 / (times[1] - times[0]);
}

double SampledSignal::value_at(int channel, double t) const {
    if (channel < 0 || channel >= n_channels()) {
        throw DimensionError("signal channel " + std::to_string(channel) + " out of range");
    }
    if (times.empty()) throw ConfigError("empty signal");
    if (t <= times.front()) return values(channel, 0);
    if (t >= times.back()) return values(channel, n_samples() - 1);
    const double dt = times[1] - times[0];
    const long k = static_cast<long>(std::floor((t - times.front()) / dt));
    const long k0 = std::min(k, n_samples() - 2);
    const double alpha = (t - times[static_cast<size_t>(k0)]) / dt;
    return (1.0 - alpha) * values(channel, k0) + alpha * values(channel, k0 + 1);
}

Eigen::VectorXd SampledSignal::resample(int channel, const std::vector<double>& at_times) const {
    Eigen::VectorXd out(static_cast<long>(at_times.size()));
    for (size_t k = 0; k < at_times.size(); ++k) {
        out(static_cast<long>(k)) = value_at(channel, at_times[k]);
    }
    return out;
}

SampledSignal triple_harmonic(double amplitude, double duration_s, double sample_rate,
                              const std::array<double, 3>& frequencies_hz) {
    const double f_max = std::max({frequencies_hz[0], frequencies_hz[1], frequencies_hz[2]});
    if (sample_rate < 2.0 * f_max) {
        throw ConfigError("sample rate must be >= 2x the highest harmonic frequency");
    }
    SampledSignal sig;
    sig.times = uniform_times(duration_s, sample_rate);
    sig.values.resize(1, static_cast<long>(sig.times.size()));
    for (size_t k = 0; k < sig.times.size(); ++k) {
        const double t = sig.times[k];
        sig.values(0, static_cast<long>(k)) = amplitude * std::sin(kTwoPi * frequencies_hz[0] * t) *
                                              std::sin(kTwoPi * frequencies_hz[1] * t) *
                                              std::sin(kTwoPi * frequencies_hz[2] * t);
    }
    return sig;
}

SampledSignal single_harmonic(double amplitude, double frequency_hz, double duration_s,
                              double sample_rate) {
    if (!(frequency_hz > 0.0)) throw ConfigError("harmonic frequency must be > 0");
    if (sample_rate < 2.0 * frequency_hz) {
        throw ConfigError("sample rate must be >= 2x the harmonic frequency");
    }
    SampledSignal sig;
    sig.times = uniform_times(duration_s, sample_rate);
    sig.values.resize(1, static_cast<long>(sig.times.size()));
    for (size_t k = 0; k < sig.times.size(); ++k) {
        sig.values(0, static_cast<long>(k)) = amplitude * std::sin(kTwoPi * frequency_hz * sig.times[k]);
    }
    return sig;
}

SampledSignal pwm3(double on_s, double off_s, double amplitude, double duration_s,
                   double sample_rate) {
    if (!(on_s > 0.0)) throw ConfigError("pwm on time must be > 0");
    if (off_s < 0.0) throw ConfigError("pwm off time must be >= 0");
    if (sample_rate * on_s < 2.0) throw ConfigError("pwm pulses not representable at this sample rate");

    const double slot = on_s + off_s;
    const double cycle = 3.0 * slot;

    SampledSignal sig;
    sig.times = uniform_times(duration_s, sample_rate);
    sig.values = Eigen::MatrixXd::Zero(3, static_cast<long>(sig.times.size()));
    for (size_t k = 0; k < sig.times.size(); ++k) {
        const double phase = std::fmod(sig.times[k], cycle);
        const int channel = static_cast<int>(phase / slot);
        const double in_slot = phase - channel * slot;
        if (channel < 3 && in_slot < on_s) {
            sig.values(channel, static_cast<long>(k)) = amplitude;
        }
    }
    return sig;
}

Eigen::VectorXd piecewise_constant_target(const std::vector<std::pair<double, double>>& segments,
                                          double sample_rate) {
    if (segments.empty()) throw ConfigError("piecewise target needs at least one segment");
    if (sample_rate <= 0.0) throw ConfigError("sample rate must be > 0");
    long total = 0;
    for (const auto& [value, duration] : segments) {
        (void)value;
        if (!(duration > 0.0)) throw ConfigError("piecewise segment durations must be > 0");
        total += static_cast<long>(std::llround(duration * sample_rate));
    }
    Eigen::VectorXd out(total);
    long pos = 0;
    for (const auto& [value, duration] : segments) {
        const long n = static_cast<long>(std::llround(duration * sample_rate));
        out.segment(pos, n).setConstant(value);
        pos += n;
    }
    return out;
}

SampledSignal make_signal(const SignalSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case SignalKind::TripleHarmonic: {
            std::array<double, 3> freqs = kTripleHarmonicHz;
            if (spec.frequencies_hz.size() == 3) {
                freqs = {spec.frequencies_hz[0], spec.frequencies_hz[1], spec.frequencies_hz[2]};
            }
            return triple_harmonic(spec.amplitude, spec.duration_s, spec.sample_rate, freqs);
        }
        case SignalKind::SingleHarmonic: {
            if (spec.frequencies_hz.size() != 1) {
                throw ConfigError("single harmonic spec needs exactly one frequency");
            }
            return single_harmonic(spec.amplitude, spec.frequencies_hz[0], spec.duration_s,
                                   spec.sample_rate);
        }
        case SignalKind::Pwm3:
            return pwm3(spec.pwm_on_s, spec.pwm_off_s, spec.amplitude, spec.duration_s,
                        spec.sample_rate);
    }
    throw ConfigError("unknown signal kind");
}

} // namespace reskit
