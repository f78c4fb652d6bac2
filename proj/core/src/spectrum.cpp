#include "reskit/spectrum.hpp"

#include "reskit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace reskit {

long MagnitudeSpectrum::argmax() const {
    if (magnitudes.empty()) throw ConfigError("empty spectrum");
    return std::distance(magnitudes.begin(),
                         std::max_element(magnitudes.begin(), magnitudes.end()));
}

void fft_pow2(std::vector<std::complex<double>>& data) {
    const size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0) throw ConfigError("fft size must be a power of two");

    // Bit-reversal permutation.
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    for (size_t len = 2; len <= n; len <<= 1) {
        const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(angle), std::sin(angle));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = data[i + k];
                const std::complex<double> v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

MagnitudeSpectrum magnitude_spectrum(const Eigen::VectorXd& signal, double sample_rate) {
    const long n = signal.size();
    if (n < 2) throw ConfigError("spectrum needs >= 2 samples");
    if (!(sample_rate > 0.0)) throw ConfigError("sample rate must be > 0");

    size_t n_fft = 1;
    while (n_fft < static_cast<size_t>(n)) n_fft <<= 1;

    std::vector<std::complex<double>> buf(n_fft, {0.0, 0.0});
    double window_sum = 0.0;
    for (long k = 0; k < n; ++k) {
        const double w =
            0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                  static_cast<double>(n - 1)));
        window_sum += w;
        buf[static_cast<size_t>(k)] = signal(k) * w;
    }
    fft_pow2(buf);

    const size_t n_bins = n_fft / 2 + 1;
    MagnitudeSpectrum spec;
    spec.frequencies.resize(n_bins);
    spec.magnitudes.resize(n_bins);
    for (size_t k = 0; k < n_bins; ++k) {
        const double scale = (k == 0 || k == n_fft / 2) ? 1.0 : 2.0;
        spec.frequencies[k] = sample_rate * static_cast<double>(k) / static_cast<double>(n_fft);
        spec.magnitudes[k] = scale * std::abs(buf[k]) / window_sum;
    }
    return spec;
}

PeakSelection find_spectral_peaks(const std::vector<double>& magnitudes, int n_peaks,
                                  long min_separation) {
    const long m = static_cast<long>(magnitudes.size());
    if (n_peaks < 1) throw ConfigError("n_peaks must be >= 1");

    // Local maxima, strictly above the left neighbor so plateaus yield one
    // candidate.
    std::vector<long> candidates;
    for (long k = 1; k + 1 < m; ++k) {
        if (magnitudes[static_cast<size_t>(k)] > magnitudes[static_cast<size_t>(k - 1)] &&
            magnitudes[static_cast<size_t>(k)] >= magnitudes[static_cast<size_t>(k + 1)]) {
            candidates.push_back(k);
        }
    }
    auto by_magnitude = [&](long a, long b) {
        const double ma = magnitudes[static_cast<size_t>(a)];
        const double mb = magnitudes[static_cast<size_t>(b)];
        if (ma != mb) return ma > mb;
        return a < b;
    };
    std::sort(candidates.begin(), candidates.end(), by_magnitude);

    PeakSelection sel;
    for (long k : candidates) {
        if (static_cast<int>(sel.bins.size()) >= n_peaks) break;
        bool clear = true;
        for (long chosen : sel.bins) {
            if (std::abs(chosen - k) < min_separation) {
                clear = false;
                break;
            }
        }
        if (clear) sel.bins.push_back(k);
    }

    if (static_cast<int>(sel.bins.size()) < n_peaks) {
        sel.degenerate = true;
        std::vector<long> rest;
        for (long k = 0; k < m; ++k) {
            if (std::find(sel.bins.begin(), sel.bins.end(), k) == sel.bins.end()) {
                rest.push_back(k);
            }
        }
        std::sort(rest.begin(), rest.end(), by_magnitude);
        for (long k : rest) {
            if (static_cast<int>(sel.bins.size()) >= n_peaks) break;
            sel.bins.push_back(k);
        }
    }
    return sel;
}

} // namespace reskit
