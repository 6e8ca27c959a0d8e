#pragma once

#include <complex>
#include <vector>

#include "fracns/grid.hpp"

namespace fracns {

using Complex = std::complex<double>;

/// Divergence-free velocity field stored as complex Fourier coefficients on
/// the integer lattice. Valid fields are Hermitian-symmetric (real in physical
/// space) and mean-free. Components are stored as three contiguous n^3 blocks.
class SpectralField {
public:
    SpectralField() = default;

    explicit SpectralField(GridSpec grid, bool divergence_free = false)
        : grid_(grid), divergence_free_(divergence_free) {
        grid_.validate();
        coeffs_.assign(3 * grid_.modes(), Complex{0.0, 0.0});
    }

    const GridSpec& grid() const { return grid_; }

    bool divergence_free() const { return divergence_free_; }
    void set_divergence_free(bool v) { divergence_free_ = v; }

    Complex* component(int c) { return coeffs_.data() + static_cast<std::size_t>(c) * grid_.modes(); }
    const Complex* component(int c) const {
        return coeffs_.data() + static_cast<std::size_t>(c) * grid_.modes();
    }

    Complex& at(int c, std::size_t mode) { return component(c)[mode]; }
    const Complex& at(int c, std::size_t mode) const { return component(c)[mode]; }

    /// Coefficient triple addressed by signed wavenumber.
    Complex& at_wavenumber(int c, int kx, int ky, int kz) {
        return at(c, grid_.mode_index(grid_.index_of(kx), grid_.index_of(ky), grid_.index_of(kz)));
    }
    const Complex& at_wavenumber(int c, int kx, int ky, int kz) const {
        return at(c, grid_.mode_index(grid_.index_of(kx), grid_.index_of(ky), grid_.index_of(kz)));
    }

    std::size_t size() const { return coeffs_.size(); }
    Complex* data() { return coeffs_.data(); }
    const Complex* data() const { return coeffs_.data(); }

    SpectralField& operator+=(const SpectralField& o) {
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        divergence_free_ = divergence_free_ && o.divergence_free_;
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        divergence_free_ = divergence_free_ && o.divergence_free_;
        return *this;
    }
    SpectralField& operator*=(double a) {
        for (auto& c : coeffs_) c *= a;
        return *this;
    }

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double a, SpectralField f) { return f *= a; }

private:
    GridSpec grid_;
    std::vector<Complex> coeffs_;
    bool divergence_free_ = false;
};

/// Scalar physical-space samples on the collocation grid (one value per point).
struct PhysicalScalar {
    GridSpec grid;
    std::vector<double> values;  // size n^3, storage order matches mode_index
};

/// Vector physical-space samples (three scalar blocks).
struct PhysicalVector {
    GridSpec grid;
    std::vector<double> values;  // size 3*n^3

    double* component(int c) { return values.data() + static_cast<std::size_t>(c) * grid.modes(); }
    const double* component(int c) const {
        return values.data() + static_cast<std::size_t>(c) * grid.modes();
    }
};

}  // namespace fracns
