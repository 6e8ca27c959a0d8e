#pragma once

#include <complex>

namespace fracns {

/// Cached FFTW plans for an n^3 complex-to-complex transform pair. Plans are
/// created once per grid size (plan creation is serialized; execution through
/// the new-array interface is safe from concurrent threads). Plans use
/// FFTW_ESTIMATE so results are reproducible run to run.
class SpectralTransform {
public:
    /// Registry lookup; creates the plan pair on first use of a size.
    static const SpectralTransform& for_size(int n);

    /// Unnormalized backward transform: coefficients -> physical samples
    /// f(x_m) = sum_k c(k) exp(i k . x_m).
    void to_physical(const std::complex<double>* spec, std::complex<double>* phys) const;

    /// Forward transform scaled by 1/n^3: physical samples -> coefficients.
    void to_spectral(const std::complex<double>* phys, std::complex<double>* spec) const;

    SpectralTransform(const SpectralTransform&) = delete;
    SpectralTransform& operator=(const SpectralTransform&) = delete;
    ~SpectralTransform();

private:
    explicit SpectralTransform(int n);

    int n_;
    void* forward_;   // fftw_plan
    void* backward_;  // fftw_plan
};

}  // namespace fracns
