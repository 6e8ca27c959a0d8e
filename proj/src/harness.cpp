#include "fracns/harness.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "fracns/fft.hpp"
#include "fracns/io.hpp"

namespace fracns {

namespace {

/// Box-Muller on explicit mt19937_64 draws; std::normal_distribution is
/// implementation-defined, this is not.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(kTwoPi * u2);
        have_spare_ = true;
        return r * std::cos(kTwoPi * u2);
    }

private:
    double uniform() {
        return (rng_() >> 11) * 0x1.0p-53;  // [0,1) with 53 random bits
    }
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

SpectralField taylor_green(const GridSpec& grid) {
    SpectralField u(grid, true);
    // (sin x1 cos x2 cos x3, -cos x1 sin x2 cos x3, 0): eight corner modes.
    for (int sx : {-1, 1})
        for (int sy : {-1, 1})
            for (int sz : {-1, 1}) {
                u.at_wavenumber(0, sx, sy, sz) = Complex{0.0, -sx / 8.0};
                u.at_wavenumber(1, sx, sy, sz) = Complex{0.0, sy / 8.0};
            }
    return u;
}

SpectralField random_divfree(const DatumSpec& spec, const GridSpec& grid) {
    SpectralField u(grid, false);
    GaussianStream gauss(spec.seed);
    const int n = grid.n;
    // Fill one representative of each Hermitian pair in storage order; the
    // Nyquist planes stay zero so the field is exactly real.
    for_each_mode(grid, [&](std::size_t idx, int kx, int ky, int kz) {
        if (kx == -n / 2 || ky == -n / 2 || kz == -n / 2) return;
        if (kx == 0 && ky == 0 && kz == 0) return;
        if (!grid.in_dealias_mask(kx, ky, kz)) return;
        const std::size_t neg = grid.mode_index(grid.index_of(-kx), grid.index_of(-ky),
                                                grid.index_of(-kz));
        if (neg < idx) return;  // the partner already drew
        const double ksq = double(kx) * kx + double(ky) * ky + double(kz) * kz;
        const double amp = std::pow(ksq, -spec.spectrum_slope / 2.0);
        for (int c = 0; c < 3; ++c) {
            const Complex z{gauss.next(), gauss.next()};
            u.at(c, idx) = amp * z;
            u.at(c, neg) = amp * std::conj(z);
        }
    });
    return leray_project(u);
}

}  // namespace

SpectralField make_datum(const DatumSpec& spec, const GridSpec& grid) {
    grid.validate();
    SpectralField u;
    switch (spec.kind) {
        case DatumSpec::Kind::TaylorGreen: u = taylor_green(grid); break;
        case DatumSpec::Kind::RandomDivFree: u = random_divfree(spec, grid); break;
        case DatumSpec::Kind::File: u = read_field_snapshot(spec.path); break;
    }
    if (spec.target_order || spec.target_value) {
        if (!spec.target_order || !spec.target_value)
            throw std::invalid_argument("make_datum: target norm needs both order and value");
        if (!(*spec.target_value > 0.0))
            throw std::invalid_argument("make_datum: target norm value must be > 0");
        const double current = sobolev_norm_hs(u, *spec.target_order);
        if (current == 0.0)
            throw std::invalid_argument("make_datum: cannot rescale a zero field to a nonzero norm");
        u *= *spec.target_value / current;
    }
    return u;
}

std::vector<Complex> random_scalar_modes(const GridSpec& grid, double slope, std::uint64_t seed) {
    std::vector<Complex> f(grid.modes(), Complex{0.0, 0.0});
    GaussianStream gauss(seed);
    const int n = grid.n;
    for_each_mode(grid, [&](std::size_t idx, int kx, int ky, int kz) {
        if (kx == -n / 2 || ky == -n / 2 || kz == -n / 2) return;
        if (kx == 0 && ky == 0 && kz == 0) return;
        if (!grid.in_dealias_mask(kx, ky, kz)) return;
        const std::size_t neg = grid.mode_index(grid.index_of(-kx), grid.index_of(-ky),
                                                grid.index_of(-kz));
        if (neg < idx) return;
        const double ksq = double(kx) * kx + double(ky) * ky + double(kz) * kz;
        const double amp = std::pow(ksq, -slope / 2.0);
        const Complex z{gauss.next(), gauss.next()};
        f[idx] = amp * z;
        f[neg] = amp * std::conj(z);
    });
    return f;
}

StabilityReport stability_experiment(const SpectralField& u0, const SpectralField& v0,
                                     double alpha, double beta, double s, double delta,
                                     double T, const SolverParams& base,
                                     const ConstantsLedger& ledger) {
    if (!(u0.grid() == v0.grid()))
        throw std::invalid_argument("stability_experiment: data live on different grids");
    GronwallSpec gspec = GronwallSpec::make(s, alpha, beta, delta, ledger);

    SolverParams pu = base;
    pu.alpha = alpha;
    pu.t_end = T;
    SolverParams pv = pu;
    pv.alpha = beta;

    StabilityReport rep;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.s = s;
    rep.delta = delta;

    // Lockstep integration: run the u-trajectory capturing states through the
    // observer of the v-run would need both in memory; instead advance two
    // integrators manually on the snapped grid.
    pu.validate();
    const long steps = std::max<long>(1, std::lround(T / pu.dt));
    pu.dt = T / static_cast<double>(steps);
    pv.dt = pu.dt;

    Integrator iu(u0, pu);
    Integrator iv(v0, pv);
    const int cutoff = pu.dealias_on ? u0.grid().dealias_cutoff() : u0.grid().n / 2;

    auto log_pair = [&](double t) -> bool {
        rep.times.push_back(t);
        rep.f_series.push_back(difference_hs_sq(iu.state(), iv.state(), s));
        gspec.times.push_back(t);
        gspec.grad_hs_sq.push_back(grad_sobolev_norm_sq(iu.state(), s));
        const double hsad = sobolev_norm_hs(iu.state(), s + alpha + delta);
        gspec.u_hsad_sq.push_back(hsad * hsad);
        auto classify = [&](const SpectralField& field, RunStatus& status) {
            if (sobolev_norm_hs(field, 1.0) > pu.blowup_threshold)
                status = RunStatus::BlowupDetected;
            else if (tail_energy_fraction(field, cutoff) > 0.01)
                status = RunStatus::ResolutionExhausted;
        };
        classify(iu.state(), rep.u_status);
        classify(iv.state(), rep.v_status);
        return rep.u_status == RunStatus::Completed && rep.v_status == RunStatus::Completed;
    };

    bool clean = log_pair(0.0);
    for (long i = 0; clean && i < steps; ++i) {
        iu.advance();  // CFL violations propagate; paired runs share the grid
        iv.advance();
        clean = log_pair(static_cast<double>(i + 1) * pu.dt);
    }

    const GronwallBound bound = gronwall_bound(gspec, rep.f_series.front());
    rep.bound_series = bound.values;
    rep.gronwall = gspec;

    rep.dominated = clean;
    rep.max_f = 0.0;
    for (std::size_t i = 0; i < rep.f_series.size(); ++i) {
        rep.max_f = std::max(rep.max_f, rep.f_series[i]);
        if (rep.f_series[i] > rep.bound_series[i] * (1.0 + 1e-6)) {
            rep.dominated = false;
            if (!rep.first_violation_time) rep.first_violation_time = rep.times[i];
        }
    }
    return rep;
}

EpsilonProbeTable epsilon_probe(const SpectralField& u0, double alpha, double delta, double T,
                                const std::vector<std::pair<double, double>>& ladder,
                                const SolverParams& base, const ConstantsLedger& ledger,
                                std::uint64_t perturbation_seed) {
    EpsilonProbeTable table;
    table.M = sobolev_norm_hs(u0, delta);
    table.delta = delta;
    table.T = T;
    table.eps54 = epsilon_54(table.M, delta, ledger);

    const double s = delta;  // stability order matching the data norm
    // Local radius from the measured forcing of the unperturbed run.
    {
        GronwallSpec gs = GronwallSpec::make(s, alpha, alpha, delta, ledger);
        SolverParams pu = base;
        pu.alpha = alpha;
        pu.t_end = T;
        std::vector<double> hs1, hsad, ts;
        TrajectoryReport rep = run(u0, pu, [&](double t, const SpectralField& u) {
            ts.push_back(t);
            const double a = sobolev_norm_hs(u, s + 1.0);
            const double b = sobolev_norm_hs(u, s + alpha + delta);
            hs1.push_back(a * a);
            hsad.push_back(b * b);
        });
        double int_hs1 = 0.0, int_hsad = 0.0;
        for (std::size_t i = 1; i < ts.size(); ++i) {
            const double dt = ts[i] - ts[i - 1];
            int_hs1 += 0.5 * dt * (hs1[i] + hs1[i - 1]);
            int_hsad += 0.5 * dt * (hsad[i] + hsad[i - 1]);
        }
        table.eps_local = rep.status == RunStatus::Completed
                              ? epsilon_local(gs, T, int_hs1, int_hsad)
                              : 0.0;
    }

    std::uint64_t seed = perturbation_seed;
    for (const auto& [pert, beta] : ladder) {
        EpsilonProbeRow row;
        row.perturbation_hs = pert;
        row.beta = beta;
        row.theta = pert * pert + std::pow(std::abs(alpha - beta), delta);
        row.name = "pert=" + std::to_string(pert) + ",beta=" + std::to_string(beta);
        SpectralField v0 = u0;
        if (pert > 0.0) {
            DatumSpec pspec;
            pspec.kind = DatumSpec::Kind::RandomDivFree;
            pspec.seed = seed++;
            pspec.target_order = s;
            pspec.target_value = pert;
            v0 += make_datum(pspec, u0.grid());
        }
        try {
            StabilityReport rep =
                stability_experiment(u0, v0, alpha, beta, s, delta, T, base, ledger);
            row.dominated = rep.dominated;
            row.max_f = rep.max_f;
        } catch (const std::invalid_argument&) {
            row.admissible = false;
        }
        if (row.theta > 0.0) {
            const double lg = std::log10(row.theta);
            row.log10_conservatism_54 = lg - table.eps54.log10_value;
            row.log10_conservatism_local =
                table.eps_local > 0.0 ? lg - std::log10(table.eps_local) : 0.0;
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

double calibrate_embedding(double alpha, const GridSpec& grid, int trials, std::uint64_t seed) {
    grid.validate();
    if (!(alpha > 0.0) || !(alpha < 1.5))
        throw std::domain_error("calibrate_embedding: alpha must lie in (0, 3/2)");
    if (trials < 1) throw std::invalid_argument("calibrate_embedding: trials must be >= 1");
    const double p = 6.0 / (3.0 - 2.0 * alpha);
    const auto& tf = SpectralTransform::for_size(grid.n);
    const std::size_t total = grid.modes();
    const double cell = std::pow(kTwoPi / grid.n, 3);

    auto ratio_of = [&](const std::vector<Complex>& modes) {
        double hdot_sq = 0.0;
        for_each_mode(grid, [&](std::size_t idx, int kx, int ky, int kz) {
            const double ksq = double(kx) * kx + double(ky) * ky + double(kz) * kz;
            if (ksq == 0.0) return;
            hdot_sq += std::pow(ksq, alpha) * std::norm(modes[idx]);
        });
        const double hdot = std::sqrt(kTwoPi * kTwoPi * kTwoPi * hdot_sq);
        std::vector<Complex> phys(total);
        tf.to_physical(modes.data(), phys.data());
        double lp = 0.0;
        for (std::size_t i = 0; i < total; ++i)
            lp += std::pow(std::abs(phys[i].real()), p);
        lp = std::pow(cell * lp, 1.0 / p);
        return hdot == 0.0 ? 0.0 : lp / hdot;
    };

    // Trial 0: the single-mode anchor sin x1.
    std::vector<Complex> anchor(total, Complex{0.0, 0.0});
    anchor[grid.mode_index(grid.index_of(1), 0, 0)] = Complex{0.0, -0.5};
    anchor[grid.mode_index(grid.index_of(-1), 0, 0)] = Complex{0.0, 0.5};
    double best = ratio_of(anchor);
    for (int t = 1; t < trials; ++t)
        best = std::max(best, ratio_of(random_scalar_modes(grid, 2.0, seed + t)));
    return best;
}

double scaling_symmetry_check(const SpectralField& u0, double alpha, int r, double T,
                              const SolverParams& params) {
    if (r < 1) throw std::invalid_argument("scaling_symmetry_check: r must be >= 1");
    const GridSpec& g = u0.grid();
    GridSpec gr{g.n * r, g.dealias_fraction};
    gr.validate();
    // Every retained mode of the base grid must map inside the target mask.
    if (r * g.dealias_cutoff() > gr.dealias_cutoff())
        throw std::invalid_argument("scaling_symmetry_check: rescaled modes leave the target mask");

    const double amp = std::pow(static_cast<double>(r), 2.0 * alpha - 1.0);
    auto rescale = [&](const SpectralField& u) {
        SpectralField out(gr, u.divergence_free());
        for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
            if (!g.in_dealias_mask(kx, ky, kz)) return;
            for (int c = 0; c < 3; ++c)
                out.at_wavenumber(c, r * kx, r * ky, r * kz) = amp * u.at(c, idx);
        });
        return out;
    };

    SolverParams pbase = params;
    pbase.alpha = alpha;
    pbase.t_end = T;
    pbase.validate();
    const long steps = std::max<long>(1, std::lround(T / pbase.dt));
    pbase.dt = T / static_cast<double>(steps);

    const double tscale = std::pow(static_cast<double>(r), 2.0 * alpha);
    SolverParams pfine = pbase;
    pfine.t_end = T / tscale;
    pfine.dt = pbase.dt / tscale;

    Integrator coarse(dealias(u0), pbase);
    Integrator fine(rescale(dealias(u0)), pfine);
    for (long i = 0; i < steps; ++i) {
        coarse.advance();
        fine.advance();
    }

    const SpectralField expected = rescale(coarse.state());
    const SpectralField got = fine.state();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        num += std::norm(expected.data()[i] - got.data()[i]);
        den += std::norm(expected.data()[i]);
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

}  // namespace fracns
