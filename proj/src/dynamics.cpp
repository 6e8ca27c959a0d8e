#include "fracns/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "fracns/fft.hpp"

namespace fracns {

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Completed: return "completed";
        case RunStatus::BlowupDetected: return "blowup_detected";
        case RunStatus::ResolutionExhausted: return "resolution_exhausted";
    }
    return "unknown";
}

SpectralField nonlinear_term(const SpectralField& u, double eps, bool apply_dealias) {
    const GridSpec& g = u.grid();
    const auto& tf = SpectralTransform::for_size(g.n);
    const std::size_t total = g.modes();

    // Advecting velocity in physical space (mollified).
    const SpectralField w = mollify(u, eps);
    std::vector<double> adv(3 * total);
    {
        std::vector<Complex> buf(total);
        for (int c = 0; c < 3; ++c) {
            tf.to_physical(w.component(c), buf.data());
            for (std::size_t i = 0; i < total; ++i) adv[c * total + i] = buf[i].real();
        }
    }

    SpectralField out(g, false);
    std::vector<Complex> spec(total), phys(total);
    std::vector<double> conv(total);
    for (int c = 0; c < 3; ++c) {
        std::fill(conv.begin(), conv.end(), 0.0);
        for (int j = 0; j < 3; ++j) {
            // d_j u_c in physical space.
            for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
                const int kj = j == 0 ? kx : (j == 1 ? ky : kz);
                spec[idx] = Complex{0.0, double(kj)} * u.at(c, idx);
            });
            tf.to_physical(spec.data(), phys.data());
            const double* wj = adv.data() + static_cast<std::size_t>(j) * total;
            for (std::size_t i = 0; i < total; ++i) conv[i] += wj[i] * phys[i].real();
        }
        for (std::size_t i = 0; i < total; ++i) phys[i] = Complex{conv[i], 0.0};
        tf.to_spectral(phys.data(), out.component(c));
        out.at(c, 0) = Complex{0.0, 0.0};  // transport of a mean-free field has exact zero mean
    }

    if (apply_dealias) out = dealias(out);
    out = leray_project(out);
    out *= -1.0;
    out.set_divergence_free(true);
    return out;
}

Integrator::Integrator(SpectralField state, SolverParams params)
    : state_(std::move(state)), params_(std::move(params)) {
    params_.validate();
    // Galerkin semantics: the nonlinear dynamics lives inside the mask.
    if (params_.dealias_on && params_.nonlinearity_on) state_ = dealias(state_);
    const GridSpec& g = state_.grid();
    half_factor_.resize(g.modes());
    full_factor_.resize(g.modes());
    for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
        const double ksq = double(kx) * kx + double(ky) * ky + double(kz) * kz;
        const double lam = ksq == 0.0 ? 0.0 : std::pow(ksq, params_.alpha);
        half_factor_[idx] = std::exp(-0.5 * lam * params_.dt);
        full_factor_[idx] = std::exp(-lam * params_.dt);
    });
}

SpectralField Integrator::apply_factor(const SpectralField& u,
                                       const std::vector<double>& factor) const {
    SpectralField out = u;
    const std::size_t total = u.grid().modes();
    for (int c = 0; c < 3; ++c) {
        Complex* dst = out.component(c);
        for (std::size_t i = 0; i < total; ++i) dst[i] *= factor[i];
    }
    return out;
}

SpectralField Integrator::rhs(const SpectralField& u) const {
    return nonlinear_term(u, params_.mollifier_eps, params_.dealias_on);
}

void Integrator::advance() {
    const double dt = params_.dt;
    if (!params_.nonlinearity_on) {
        state_ = apply_factor(state_, full_factor_);
        time_ += dt;
        return;
    }
    const double umax = max_pointwise_speed(state_);
    if (dt * umax * state_.grid().n / 2.0 > 0.5 + 1e-12)
        throw CflViolation(dt / 2.0);

    const SpectralField k1 = rhs(state_);
    SpectralField s1 = state_;
    s1 += (dt / 2.0) * k1;
    const SpectralField k2 = rhs(apply_factor(s1, half_factor_));
    SpectralField s2 = apply_factor(state_, half_factor_);
    s2 += (dt / 2.0) * k2;
    const SpectralField k3 = rhs(s2);
    SpectralField s3 = apply_factor(state_, full_factor_);
    s3 += dt * apply_factor(k3, half_factor_);
    const SpectralField k4 = rhs(s3);

    SpectralField next = apply_factor(state_, full_factor_);
    next += (dt / 6.0) * apply_factor(k1, full_factor_);
    next += (dt / 3.0) * apply_factor(k2 + k3, half_factor_);
    next += (dt / 6.0) * k4;
    next.set_divergence_free(true);
    state_ = std::move(next);
    time_ += dt;
}

SpectralField step(const SpectralField& u, const SolverParams& params) {
    Integrator integ(u, params);
    integ.advance();
    return integ.state();
}

namespace {

/// Cumulative integral of the logged rate at 4th order: composite Simpson on
/// even indices, a three-point quadratic rule for the odd trailing interval.
/// Increments are clamped at zero so the series stays nondecreasing even for
/// violently decaying rates.
std::vector<double> cumulative_integral(const std::vector<double>& rate, double dt) {
    const std::size_t m = rate.size();
    std::vector<double> out(m, 0.0);
    if (m < 2) return out;
    if (m == 2) {
        out[1] = 0.5 * dt * (rate[0] + rate[1]);
        return out;
    }
    for (std::size_t i = 1; i < m; ++i) {
        double inc;
        if (i % 2 == 0) {
            inc = dt / 3.0 * (rate[i - 2] + 4.0 * rate[i - 1] + rate[i]) -
                  (out[i - 1] - out[i - 2]);
        } else if (i == 1) {
            inc = dt / 12.0 * (5.0 * rate[0] + 8.0 * rate[1] - rate[2]);
        } else {
            inc = dt / 12.0 * (-rate[i - 2] + 8.0 * rate[i - 1] + 5.0 * rate[i]);
        }
        out[i] = out[i - 1] + std::max(inc, 0.0);
    }
    return out;
}

}  // namespace

TrajectoryReport run(const SpectralField& u0, const SolverParams& params,
                     const StepObserver& observer) {
    params.validate();
    for (int c = 0; c < 3; ++c)
        if (u0.at(c, 0) != Complex{0.0, 0.0})
            throw std::invalid_argument("run: datum must be mean-free");
    if (divergence_defect(u0) > 1e-8)
        throw std::invalid_argument("run: datum must be divergence-free");
    SolverParams p = params;
    const long steps0 = std::max<long>(1, std::lround(params.t_end / params.dt));
    p.dt = params.t_end / static_cast<double>(steps0);

    for (int attempt = 0; attempt < 12; ++attempt) {
        const long steps = std::max<long>(1, std::lround(p.t_end / p.dt));
        TrajectoryReport rep;
        rep.record_orders = p.record_orders;
        rep.sobolev_norms.assign(p.record_orders.size(), {});
        rep.dt_used = p.dt;
        rep.alpha = p.alpha;
        rep.mollifier_eps = p.mollifier_eps;
        rep.grid_n = u0.grid().n;
        rep.dealias_fraction = u0.grid().dealias_fraction;
        rep.status = RunStatus::Completed;

        const int cutoff = p.dealias_on ? u0.grid().dealias_cutoff() : u0.grid().n / 2;
        Integrator integ(u0, p);

        auto log_state = [&](double t, const SpectralField& u) -> bool {
            rep.times.push_back(t);
            const double l2 = sobolev_norm(u, NormConvention::l2());
            rep.energy.push_back(0.5 * l2 * l2);
            const double hdot = sobolev_norm(u, NormConvention::homogeneous(p.alpha));
            rep.dissipation_rate.push_back(hdot * hdot);
            for (std::size_t i = 0; i < p.record_orders.size(); ++i)
                rep.sobolev_norms[i].push_back(sobolev_norm_hs(u, p.record_orders[i]));
            if (observer) observer(t, u);
            if (sobolev_norm_hs(u, 1.0) > p.blowup_threshold) {
                rep.status = RunStatus::BlowupDetected;
                return false;
            }
            if (tail_energy_fraction(u, cutoff) > 0.01) {
                rep.status = RunStatus::ResolutionExhausted;
                return false;
            }
            return true;
        };

        bool cfl_hit = false;
        if (log_state(0.0, integ.state())) {
            for (long i = 0; i < steps; ++i) {
                try {
                    integ.advance();
                } catch (const CflViolation&) {
                    cfl_hit = true;
                    break;
                }
                if (!log_state(static_cast<double>(i + 1) * p.dt, integ.state())) break;
            }
        }
        if (cfl_hit) {
            p.dt /= 2.0;
            continue;
        }
        rep.dissipation_integral = cumulative_integral(rep.dissipation_rate, p.dt);
        return rep;
    }
    throw std::runtime_error("run: CFL halving did not stabilize the step size");
}

double energy_budget_check(const TrajectoryReport& report) {
    double worst = 0.0;
    for (std::size_t i = 0; i < report.times.size(); ++i) {
        worst = std::max(worst, std::abs(report.energy[i] + report.dissipation_integral[i] -
                                         report.energy[0]));
    }
    return worst;
}

}  // namespace fracns
