#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fracns/estimates.hpp"
#include "fracns/fft.hpp"
#include "fracns/harness.hpp"
#include "fracns/spectral.hpp"

using namespace fracns;

namespace {

double rel(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

/// amp * sin(k . x) * e_c
SpectralField sine_field(const GridSpec& g, int kx, int ky, int kz, int c, double amp = 1.0) {
    SpectralField u(g);
    u.at_wavenumber(c, kx, ky, kz) = Complex{0.0, -0.5 * amp};
    u.at_wavenumber(c, -kx, -ky, -kz) = Complex{0.0, 0.5 * amp};
    return u;
}

double max_coeff_diff(const SpectralField& a, const SpectralField& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    return worst;
}

SpectralField random_field(int n, std::uint64_t seed, double slope = 2.0) {
    DatumSpec spec;
    spec.kind = DatumSpec::Kind::RandomDivFree;
    spec.seed = seed;
    spec.spectrum_slope = slope;
    return make_datum(spec, GridSpec{n, 2.0 / 3.0});
}

}  // namespace

TEST_CASE("frac_laplacian: unit wavenumber is a fixed point for every order") {
    GridSpec g{16, 2.0 / 3.0};
    const SpectralField u = sine_field(g, 1, 0, 0, 1);
    for (double alpha : {0.0, 0.3, 0.5, 1.0, 1.25}) {
        const SpectralField v = frac_laplacian(u, alpha);
        CHECK(max_coeff_diff(u, v) < 1e-15);
    }
}

TEST_CASE("frac_laplacian: symbol |k|^{2 alpha} on a |k|=2 mode") {
    GridSpec g{16, 2.0 / 3.0};
    const SpectralField u = sine_field(g, 2, 0, 0, 1);
    const SpectralField half = frac_laplacian(u, 0.5);   // symbol 2
    const SpectralField full = frac_laplacian(u, 1.0);   // symbol 4, classical -Laplacian
    CHECK(max_coeff_diff(half, 2.0 * u) < 1e-14);
    CHECK(max_coeff_diff(full, 4.0 * u) < 1e-14);
}

TEST_CASE("frac_laplacian: rejects negative order, preserves zero mode and flag") {
    GridSpec g{16, 2.0 / 3.0};
    SpectralField u = sine_field(g, 1, 2, 0, 2);
    u.set_divergence_free(true);
    CHECK_THROWS_AS(frac_laplacian(u, -0.1), std::invalid_argument);
    const SpectralField v = frac_laplacian(u, 0.7);
    CHECK(v.divergence_free());
    CHECK(std::abs(v.at_wavenumber(0, 0, 0, 0)) == 0.0);
}

TEST_CASE("frac_laplacian: symbol exactness on random single modes") {
    GridSpec g{32, 2.0 / 3.0};
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; ++t) {
        const int kx = 1 + int(rng() % 9), ky = int(rng() % 9), kz = int(rng() % 9);
        const double amp = 0.5 + (rng() % 100) / 50.0;
        const SpectralField u = sine_field(g, kx, ky, kz, int(rng() % 3), amp);
        const double ksq = double(kx) * kx + double(ky) * ky + double(kz) * kz;
        for (double alpha : {0.5, 1.0, 1.25}) {
            const SpectralField v = frac_laplacian(u, alpha);
            const double expected = std::pow(ksq, alpha);
            const double got = sobolev_norm(v, NormConvention::l2()) /
                               sobolev_norm(u, NormConvention::l2());
            CHECK(rel(got, expected) < 1e-13);
        }
    }
}

TEST_CASE("frac_laplacian: semigroup property") {
    const SpectralField u = random_field(16, 21);
    for (double alpha : {0.6, 1.0, 1.3}) {
        const SpectralField twice = frac_laplacian(frac_laplacian(u, alpha / 2.0), alpha / 2.0);
        const SpectralField once = frac_laplacian(u, alpha);
        double worst = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double denom = std::max(std::abs(once.data()[i]), 1e-300);
            worst = std::max(worst, std::abs(twice.data()[i] - once.data()[i]) / denom);
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("sobolev_norm: single-mode closed forms") {
    GridSpec g{16, 2.0 / 3.0};
    const SpectralField u1 = sine_field(g, 1, 0, 0, 1);
    const double l2 = sobolev_norm(u1, NormConvention::l2());
    // ||sin x1||_{L2}^2 = (2pi)^3 / 2.
    CHECK(rel(l2 * l2, std::pow(kTwoPi, 3) / 2.0) < 1e-13);
    for (double s : {0.0, 0.5, 1.0, 2.0})
        CHECK(rel(sobolev_norm(u1, NormConvention::homogeneous(s)), l2) < 1e-13);

    const SpectralField u2 = sine_field(g, 2, 0, 0, 1);
    CHECK(rel(sobolev_norm(u2, NormConvention::homogeneous(1.0)),
              2.0 * sobolev_norm(u2, NormConvention::l2())) < 1e-13);
}

TEST_CASE("sobolev_norm: two-mode Plancherel sum") {
    GridSpec g{16, 2.0 / 3.0};
    const SpectralField u = sine_field(g, 1, 0, 0, 1) + sine_field(g, 0, 2, 0, 2);
    const double sin_l2_sq = std::pow(kTwoPi, 3) / 2.0;
    const double h1_sq = sobolev_norm(u, NormConvention::homogeneous(1.0));
    CHECK(rel(h1_sq * h1_sq, sin_l2_sq + 4.0 * sin_l2_sq) < 1e-13);
}

TEST_CASE("sobolev_norm: inhomogeneous norm is monotone in the order") {
    const SpectralField u = random_field(16, 33);
    double prev = 0.0;
    for (double s : {0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0}) {
        const double v = sobolev_norm_hs(u, s);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("Parseval: spectral norm equals physical quadrature") {
    const SpectralField u = random_field(16, 55);
    const PhysicalVector p = to_physical(u);
    double quad = 0.0;
    for (double v : p.values) quad += v * v;
    quad *= std::pow(kTwoPi / u.grid().n, 3);
    const double l2 = sobolev_norm(u, NormConvention::l2());
    CHECK(rel(quad, l2 * l2) < 1e-10);
    // Round trip is exact to roundoff.
    const SpectralField back = to_spectral(p);
    CHECK(max_coeff_diff(u, back) < 1e-13);
}

TEST_CASE("leray_project: pure gradient is annihilated") {
    GridSpec g{16, 2.0 / 3.0};
    // grad(sin x1) = cos(x1) e1: coefficients 1/2 at both +-k.
    SpectralField u(g);
    u.at_wavenumber(0, 1, 0, 0) = Complex{0.5, 0.0};
    u.at_wavenumber(0, -1, 0, 0) = Complex{0.5, 0.0};
    const SpectralField v = leray_project(u);
    CHECK(sobolev_norm(v, NormConvention::l2()) < 1e-14);
}

TEST_CASE("leray_project: divergence-free fields are fixed points") {
    GridSpec g{16, 2.0 / 3.0};
    const SpectralField u = sine_field(g, 0, 1, 0, 0);  // sin(x2) e1
    CHECK(max_coeff_diff(leray_project(u), u) < 1e-15);
}

TEST_CASE("leray_project: oblique single mode projects onto its solenoidal part") {
    GridSpec g{16, 2.0 / 3.0};
    const SpectralField u = sine_field(g, 1, 0, 0, 0) + sine_field(g, 1, 0, 0, 1);
    const SpectralField expected = sine_field(g, 1, 0, 0, 1);
    CHECK(max_coeff_diff(leray_project(u), expected) < 1e-15);
}

TEST_CASE("leray_project: idempotent and self-adjoint") {
    SpectralField u = random_field(16, 77);
    // Break divergence-freeness deliberately.
    u.at_wavenumber(0, 1, 1, 0) += Complex{0.3, 0.1};
    u.at_wavenumber(0, -1, -1, 0) += Complex{0.3, -0.1};
    const SpectralField pu = leray_project(u);
    CHECK(max_coeff_diff(leray_project(pu), pu) < 1e-14);
    CHECK(divergence_defect(pu) < 1e-13);

    const SpectralField v = random_field(16, 78);
    const double lhs = l2_inner_product(pu, v);
    const double rhs = l2_inner_product(u, leray_project(v));
    CHECK(rel(lhs, rhs) < 1e-12);
}

TEST_CASE("mollify: identity at eps = 0 and exact single-mode damping") {
    GridSpec g{16, 2.0 / 3.0};
    const SpectralField u = sine_field(g, 1, 0, 0, 1);
    CHECK(max_coeff_diff(mollify(u, 0.0), u) == 0.0);
    const SpectralField v = mollify(u, 1.0);
    CHECK(max_coeff_diff(v, std::exp(-0.5) * u) < 1e-15);
    CHECK_THROWS_AS(mollify(u, -1.0), std::invalid_argument);
}

TEST_CASE("mollify: contracts the L2 norm, strictly for eps > 0") {
    const SpectralField u = random_field(16, 99);
    const double base = sobolev_norm(u, NormConvention::l2());
    CHECK(sobolev_norm(mollify(u, 0.0), NormConvention::l2()) == base);
    double prev = base;
    for (double eps : {0.1, 0.2, 0.4}) {
        const double cur = sobolev_norm(mollify(u, eps), NormConvention::l2());
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(mollify(u, 0.5).divergence_free() == u.divergence_free());
}

TEST_CASE("dealias: mask semantics") {
    GridSpec g{16, 2.0 / 3.0};
    const int cutoff = g.dealias_cutoff();
    CHECK(cutoff == 5);

    const SpectralField inside = sine_field(g, cutoff, 0, 0, 1);
    CHECK(max_coeff_diff(dealias(inside), inside) == 0.0);

    const SpectralField outside = sine_field(g, cutoff + 1, 0, 0, 1);
    CHECK(sobolev_norm(dealias(outside), NormConvention::l2()) == 0.0);

    const SpectralField mixed = inside + outside;
    CHECK(max_coeff_diff(dealias(mixed), inside) == 0.0);
    CHECK(max_coeff_diff(dealias(dealias(mixed)), dealias(mixed)) == 0.0);
}

TEST_CASE("generated random fields satisfy the representation invariants") {
    const SpectralField u = random_field(16, 123);
    CHECK(hermitian_defect(u) < 1e-12);
    CHECK(divergence_defect(u) < 1e-12);
    CHECK(std::abs(u.at_wavenumber(0, 0, 0, 0)) == 0.0);
    // Physical samples are real: imaginary residue of the transform is tiny.
    const auto& tf = SpectralTransform::for_size(16);
    std::vector<Complex> phys(u.grid().modes());
    tf.to_physical(u.component(0), phys.data());
    double worst = 0.0;
    for (const Complex& z : phys) worst = std::max(worst, std::abs(z.imag()));
    CHECK(worst < 1e-12);
}

TEST_CASE("interpolation with constant 1: equality on single modes") {
    GridSpec g{16, 2.0 / 3.0};
    const SpectralField u = sine_field(g, 2, 1, 0, 2);
    for (double beta : {0.8, 1.0, 1.25}) {
        for (double s : {1.0 - beta + 0.05, 0.5, 1.0}) {
            if (s < 0.0) continue;
            const InequalityProbe p = interpolation_gradient_check(u, s, beta);
            CHECK(rel(p.lhs, p.rhs) < 1e-12);
        }
        const InequalityProbe q = interpolation_sobolev_check(u, beta);
        CHECK(rel(q.lhs, q.rhs) < 1e-12);
    }
}

TEST_CASE("interpolation with constant 1: inequality on random fields") {
    std::mt19937_64 rng(2024);
    auto uniform = [&](double a, double b) { return a + (b - a) * ((rng() >> 11) * 0x1.0p-53); };
    for (int t = 0; t < 100; ++t) {
        const SpectralField u = random_field(16, 300 + t);
        const double beta = uniform(0.75, 1.25);
        const double s = uniform(std::max(0.0, 1.0 - beta), 1.0);
        CHECK(interpolation_gradient_check(u, s, beta).margin >= -1e-12);
        CHECK(interpolation_sobolev_check(u, beta).margin >= -1e-12);
    }
}

TEST_CASE("grid validation rejects malformed specs") {
    CHECK_THROWS_AS((GridSpec{6, 2.0 / 3.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{15, 2.0 / 3.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{16, 0.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{16, 1.5}).validate(), std::invalid_argument);
    CHECK_NOTHROW((GridSpec{8, 1.0}).validate());
}
