#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace reskit {

/// One-sided magnitude spectrum. Bin k sits at frequencies[k] Hz.
struct MagnitudeSpectrum {
    std::vector<double> frequencies;
    std::vector<double> magnitudes;

    /// Index of the largest-magnitude bin.
    long argmax() const;
};

/// Hann-windowed one-sided magnitude spectrum. The windowed signal is
/// zero-padded to the next power of two, magnitudes are normalized by the
/// window sum (factor 2 on interior bins), so a pure in-bin sinusoid of
/// amplitude A shows a peak of about A.
MagnitudeSpectrum magnitude_spectrum(const Eigen::VectorXd& signal, double sample_rate);

/// The `n_peaks` dominant local maxima of a magnitude array, greedily picked
/// by magnitude with at least `min_separation` bins between any two picks.
/// If fewer local maxima exist, the result is padded with the largest
/// remaining bins and `degenerate` is set.
struct PeakSelection {
    std::vector<long> bins;
    bool degenerate = false;
};

PeakSelection find_spectral_peaks(const std::vector<double>& magnitudes, int n_peaks,
                                  long min_separation = 2);

/// In-place radix-2 FFT on a power-of-two-sized complex buffer
/// (interleaved re/im pairs).
void fft_pow2(std::vector<std::complex<double>>& data);

} // namespace reskit
