#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracns/harness.hpp"
#include "fracns/spectral.hpp"

using namespace fracns;

namespace {

double rel(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

SpectralField taylor_green_scaled(int n, double h1_norm) {
    DatumSpec spec;
    spec.kind = DatumSpec::Kind::TaylorGreen;
    spec.target_order = 1.0;
    spec.target_value = h1_norm;
    return make_datum(spec, GridSpec{n, 2.0 / 3.0});
}

SpectralField perturbation(int n, std::uint64_t seed, double h1_norm) {
    DatumSpec spec;
    spec.kind = DatumSpec::Kind::RandomDivFree;
    spec.seed = seed;
    spec.target_order = 1.0;
    spec.target_value = h1_norm;
    return make_datum(spec, GridSpec{n, 2.0 / 3.0});
}

SolverParams quick_params(double dt) {
    SolverParams p;
    p.alpha = 1.25;
    p.dt = dt;
    p.t_end = 1.0;  // overwritten by stability_experiment
    return p;
}

}  // namespace

TEST_CASE("make_datum: Taylor-Green closed forms") {
    DatumSpec spec;
    spec.kind = DatumSpec::Kind::TaylorGreen;
    const SpectralField u = make_datum(spec, GridSpec{16, 2.0 / 3.0});
    CHECK(divergence_defect(u) < 1e-14);
    CHECK(hermitian_defect(u) < 1e-14);
    // ||u||_{L2} = (2pi)^{3/2} / 2.
    CHECK(rel(sobolev_norm(u, NormConvention::l2()), std::pow(kTwoPi, 1.5) / 2.0) < 1e-13);
    // All energy on |k|^2 = 3: H^s norms follow a single shell.
    CHECK(rel(sobolev_norm_hs(u, 1.0), 2.0 * sobolev_norm(u, NormConvention::l2())) < 1e-13);
}

TEST_CASE("make_datum: exact rescaling to the target norm") {
    DatumSpec spec;
    spec.kind = DatumSpec::Kind::RandomDivFree;
    spec.seed = 5;
    spec.target_order = 1.0;
    spec.target_value = 0.37;
    const SpectralField u = make_datum(spec, GridSpec{16, 2.0 / 3.0});
    CHECK(std::abs(sobolev_norm_hs(u, 1.0) - 0.37) <= 1e-10 * 0.37);
    CHECK(divergence_defect(u) < 1e-12);
}

TEST_CASE("make_datum: determinism and input validation") {
    DatumSpec spec;
    spec.kind = DatumSpec::Kind::RandomDivFree;
    spec.seed = 42;
    const GridSpec g{16, 2.0 / 3.0};
    const SpectralField a = make_datum(spec, g);
    const SpectralField b = make_datum(spec, g);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.data()[i] == b.data()[i]);
    DatumSpec other = spec;
    other.seed = 43;
    const SpectralField c = make_datum(other, g);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) diff += std::norm(a.data()[i] - c.data()[i]);
    CHECK(diff > 0.0);

    DatumSpec bad = spec;
    bad.target_order = 1.0;
    bad.target_value = 0.0;
    CHECK_THROWS_AS(make_datum(bad, g), std::invalid_argument);
    DatumSpec half = spec;
    half.target_order = 1.0;  // value missing
    CHECK_THROWS_AS(make_datum(half, g), std::invalid_argument);
}

TEST_CASE("stability_experiment: identical pair is trivially dominated") {
    const SpectralField u0 = taylor_green_scaled(16, 0.1);
    const StabilityReport rep =
        stability_experiment(u0, u0, 1.25, 1.25, 1.0, 1.0, 0.25, quick_params(5e-3));
    CHECK(rep.dominated);
    for (double f : rep.f_series) CHECK(f == 0.0);
    CHECK(rep.max_f == 0.0);
    CHECK(!rep.first_violation_time);
}

TEST_CASE("stability_experiment: perturbed pair stays dominated; f(0) is exact") {
    const SpectralField u0 = taylor_green_scaled(16, 0.1);
    const SpectralField v0 = u0 + perturbation(16, 7, 1e-3);
    const StabilityReport rep =
        stability_experiment(u0, v0, 1.25, 1.25, 1.0, 1.0, 0.5, quick_params(5e-3));
    CHECK(rep.dominated);
    CHECK(rep.u_status == RunStatus::Completed);
    CHECK(rep.v_status == RunStatus::Completed);
    SpectralField diff = u0 - v0;
    const double d = sobolev_norm_hs(diff, 1.0);
    CHECK(rel(rep.f_series.front(), d * d) < 1e-12);
    CHECK(rel(rep.f_series.front(), 1e-6) < 1e-9);
    CHECK(rep.bound_series.front() == rep.f_series.front());
    // The comparison solution never decreases.
    for (std::size_t i = 1; i < rep.bound_series.size(); ++i)
        CHECK(rep.bound_series[i] >= rep.bound_series[i - 1]);
}

TEST_CASE("stability_experiment: order perturbation alone stays dominated") {
    const SpectralField u0 = taylor_green_scaled(16, 0.1);
    const StabilityReport rep =
        stability_experiment(u0, u0, 1.25, 1.24, 1.0, 1.0, 0.5, quick_params(5e-3));
    CHECK(rep.dominated);
    CHECK(rep.f_series.front() == 0.0);
    CHECK(rep.max_f > 0.0);  // the symbol difference forces a nonzero drift
}

TEST_CASE("stability_experiment: rejects inadmissible parameter combinations") {
    const SpectralField u0 = taylor_green_scaled(16, 0.1);
    // |alpha - beta| beyond the band.
    CHECK_THROWS_AS(stability_experiment(u0, u0, 1.25, 0.9, 1.0, 1.0, 0.25, quick_params(5e-3)),
                    std::invalid_argument);
    // s too low for the orders.
    CHECK_THROWS_AS(stability_experiment(u0, u0, 1.0, 1.0, 0.2, 1.0, 0.25, quick_params(5e-3)),
                    std::invalid_argument);
}

TEST_CASE("stability_experiment: f(T) shrinks linearly with the squared perturbation") {
    const SpectralField u0 = taylor_green_scaled(16, 0.1);
    std::vector<double> fT;
    std::vector<double> sq;
    for (double pert : {1e-3, 2e-3, 4e-3}) {
        const SpectralField v0 = u0 + perturbation(16, 11, pert);
        const StabilityReport rep =
            stability_experiment(u0, v0, 1.25, 1.25, 1.0, 1.0, 0.25, quick_params(5e-3));
        REQUIRE(rep.dominated);
        fT.push_back(rep.f_series.back());
        sq.push_back(pert * pert);
    }
    const double slope = std::log(fT.back() / fT.front()) / std::log(sq.back() / sq.front());
    CHECK(slope > 0.8);
    CHECK(slope < 1.2);
}

TEST_CASE("epsilon_probe: trivial ladder is dominated and metadata is populated") {
    const SpectralField u0 = taylor_green_scaled(16, 0.1);
    const double M = sobolev_norm_hs(u0, 1.0);
    std::vector<std::pair<double, double>> ladder = {
        {0.0, 1.25}, {0.0, 1.25}, {1e-3, 1.25}, {0.08, 1.25}, {0.0, 1.249}};
    const EpsilonProbeTable table =
        epsilon_probe(u0, 1.25, 1.0, 0.25, ladder, quick_params(5e-3));
    CHECK(rel(table.M, M) < 1e-12);
    const Epsilon54 direct = epsilon_54(table.M, 1.0, ConstantsLedger{});
    CHECK(table.eps54.value == direct.value);
    CHECK(table.eps_local > 0.0);
    REQUIRE(table.rows.size() == 5);
    for (const auto& row : table.rows) {
        CHECK(row.admissible);
        CHECK(row.dominated);
    }
    // Fourth row sits right of the critical-order radius: theta >= eps54.
    CHECK(table.rows[3].theta >= table.eps54.value);
    CHECK(table.rows[3].log10_conservatism_54 >= 0.0);
    // Order-offset row carries theta = |alpha-beta|^delta.
    CHECK(rel(table.rows[4].theta, 1e-3) < 1e-9);
}

TEST_CASE("calibrate_embedding: anchored by the single-mode ratio and monotone in trials") {
    const GridSpec g{16, 2.0 / 3.0};
    const double alpha = 1.0;
    // Quadrature oracle for the anchor sin(x1): p = 6/(3-2a) = 6.
    const double p = 6.0;
    const int n = g.n;
    double lp = 0.0;
    for (int i = 0; i < n; ++i) lp += std::pow(std::abs(std::sin(kTwoPi * i / n)), p);
    lp *= double(n) * n;  // constant along the other two axes
    lp = std::pow(std::pow(kTwoPi / n, 3) * lp, 1.0 / p);
    const double hdot = std::pow(kTwoPi, 1.5) / std::sqrt(2.0);  // = ||sin||_{L2}
    const double anchor_ratio = lp / hdot;

    const double est10 = calibrate_embedding(alpha, g, 10, 2026);
    const double est50 = calibrate_embedding(alpha, g, 50, 2026);
    CHECK(est10 >= anchor_ratio - 1e-12);
    CHECK(est50 >= est10);
    CHECK_THROWS_AS(calibrate_embedding(1.5, g, 10, 1), std::domain_error);

    // Ladder stays finite and bounded on this grid.
    for (double a : {0.8, 1.0, 1.2, 1.4}) {
        const double est = calibrate_embedding(a, g, 20, 99);
        CHECK(est > 0.0);
        CHECK(est < 10.0);
    }
}

TEST_CASE("scaling_symmetry_check: identity, linear homogeneity, and the full system") {
    const SpectralField u0 = taylor_green_scaled(16, 1.0);
    SolverParams p;
    p.alpha = 1.25;
    p.dt = 2e-3;
    p.t_end = 0.25;
    CHECK(scaling_symmetry_check(u0, 1.25, 1, 0.25, p) <= 1e-14);

    SolverParams lin = p;
    lin.nonlinearity_on = false;
    CHECK(scaling_symmetry_check(u0, 1.25, 2, 0.25, lin) <= 1e-12);

    CHECK(scaling_symmetry_check(u0, 1.25, 2, 0.25, p) <= 1e-6);
}

TEST_CASE("random_scalar_modes: deterministic, Hermitian, mean-free") {
    const GridSpec g{16, 2.0 / 3.0};
    const auto f = random_scalar_modes(g, 2.0, 31);
    const auto f2 = random_scalar_modes(g, 2.0, 31);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(f[i] == f2[i]);
    CHECK(std::abs(f[0]) == 0.0);
    double worst = 0.0;
    for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
        const std::size_t neg = g.mode_index(g.index_of(kx == 0 ? 0 : -kx),
                                             g.index_of(ky == 0 ? 0 : -ky),
                                             g.index_of(kz == 0 ? 0 : -kz));
        worst = std::max(worst, std::abs(f[neg] - std::conj(f[idx])));
    });
    CHECK(worst < 1e-15);
}
