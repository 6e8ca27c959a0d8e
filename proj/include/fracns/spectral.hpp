#pragma once

#include "fracns/field.hpp"

namespace fracns {

enum class NormKind { L2, HomogeneousHs, InhomogeneousHs };

/// Fixed Plancherel convention: ||f||_{L2}^2 = (2pi)^3 sum_k |f_hat(k)|^2,
/// homogeneous weight |k|^{2s}, inhomogeneous weight (1+|k|^2)^s.
struct NormConvention {
    NormKind kind = NormKind::L2;
    double order = 0.0;

    static NormConvention l2() { return {NormKind::L2, 0.0}; }
    static NormConvention homogeneous(double s) { return {NormKind::HomogeneousHs, s}; }
    static NormConvention inhomogeneous(double s) { return {NormKind::InhomogeneousHs, s}; }
};

/// (-Delta)^alpha as the exact Fourier multiplier |k|^{2alpha}.
SpectralField frac_laplacian(const SpectralField& u, double alpha);

double sobolev_norm(const SpectralField& u, NormConvention conv);
inline double sobolev_norm_hs(const SpectralField& u, double s) {
    return sobolev_norm(u, NormConvention::inhomogeneous(s));
}

/// ||Du||_{H^s}^2 = (2pi)^3 sum_k (1+|k|^2)^s |k|^2 |u_hat(k)|^2.
double grad_sobolev_norm_sq(const SpectralField& u, double s);

/// ||u-v||_{H^s}^2 without forming the difference field.
double difference_hs_sq(const SpectralField& u, const SpectralField& v, double s);

/// L2 inner product under the same Plancherel convention.
double l2_inner_product(const SpectralField& a, const SpectralField& b);

/// Per-mode projection I - k k^T/|k|^2 onto divergence-free fields.
SpectralField leray_project(const SpectralField& u);

/// Gaussian Fourier mollifier exp(-eps^2 |k|^2 / 2); eps = 0 is the identity.
SpectralField mollify(const SpectralField& u, double eps);

/// Zero all coefficients outside the max-norm dealias mask.
SpectralField dealias(const SpectralField& u);

PhysicalVector to_physical(const SpectralField& u);
SpectralField to_spectral(const PhysicalVector& p, bool divergence_free = false);

/// Largest pointwise speed max_x |u(x)| on the collocation grid.
double max_pointwise_speed(const SpectralField& u);

/// max_k |k . u_hat(k)| normalized by the field's H^1-scale amplitude.
double divergence_defect(const SpectralField& u);

/// Largest |u_hat(-k) - conj(u_hat(k))| normalized by the largest coefficient.
double hermitian_defect(const SpectralField& u);

/// Tail diagnostic: L2-energy fraction carried by the outermost retained
/// max-norm shell (|k|_inf == cutoff). Returns 0 for the zero field.
double tail_energy_fraction(const SpectralField& u, int cutoff);

}  // namespace fracns
