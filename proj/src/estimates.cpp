#include "fracns/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracns/spectral.hpp"

namespace fracns {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn10 = 2.302585092994045684;
constexpr double kBlowupCeiling = 1e60;
}  // namespace

double gamma_exponent(double s, double beta) {
    const double den = 4.0 * beta - 5.0 + 2.0 * s;
    if (!(den > 0.0))
        throw std::domain_error("gamma_exponent: supercritical order/regularity pair (4b-5+2s <= 0)");
    return (6.0 * beta - 5.0 + 2.0 * s) / den;
}

C0Result constant_c0(double s, double order, const ConstantsLedger& ledger) {
    ledger.validate();
    const double den = 4.0 * order - 5.0 + 2.0 * s;
    if (!(den > 0.0))
        throw std::domain_error("constant_c0: inadmissible (s, order) pair");
    if (!(s >= 0.0) || s > 1.0)
        throw std::domain_error("constant_c0: s must lie in [0, 1]");
    if (order > 1.25 + 1e-12)
        throw std::domain_error("constant_c0: order must not exceed 5/4");

    C0Result out;
    if (s == 1.0) {
        out.branch = "s=1";
        out.value = (1.0 - 3.0 / (4.0 * order)) *
                    std::pow(6.0 * std::pow(ledger.c_bar, 3.0 / (2.0 * order)) / order,
                             4.0 * order / (4.0 * order - 3.0));
    } else {
        out.branch = "s<1";
        out.value = std::pow((1.0 + ledger.d_bar) * ledger.c_bar * ledger.c_bar,
                             4.0 * order / den) *
                    std::pow(12.0 * (5.0 - 2.0 * s) / (4.0 * order), (5.0 - 2.0 * s) / den);
    }
    // Coarse cap, with the order argument playing alpha.
    const double sigma = s - (2.5 - 2.0 * order);
    out.cap = 2.0 * std::pow(12.0 * (1.0 + ledger.d_bar) * ledger.c_bar * ledger.c_bar,
                             5.0 / sigma);
    if (!(out.value <= out.cap))
        throw std::logic_error("constant_c0: closed form exceeds its coarse cap");
    return out;
}

double constant_c1(double s, const ConstantsLedger& ledger) {
    ledger.validate();
    (void)s;  // the closed form does not depend on s within the admissible band
    const double c4 = std::pow(ledger.c_bar, 4);
    const double c6 = std::pow(ledger.c_bar, 6);
    return 6.0 * (3.0 * (1.0 + ledger.d_bar) * (1.0 + ledger.d_bar) * c4 + 2.0 * c6);
}

double constant_c1_hk(int k, const ConstantsLedger& ledger, std::optional<double> override_value) {
    if (k < 1) throw std::invalid_argument("constant_c1_hk: k must be >= 1");
    if (override_value) {
        if (!(*override_value > 0.0))
            throw std::invalid_argument("constant_c1_hk: override must be > 0");
        return *override_value;
    }
    return constant_c1(1.0, ledger);
}

DiffBoundCheck frac_lap_diff_check(const SpectralField& u, double alpha, double beta,
                                   double delta, double s, const ConstantsLedger& ledger) {
    ledger.validate();
    if (!(delta > 0.0) || delta > 1.0)
        throw std::invalid_argument("frac_lap_diff_check: delta must lie in (0,1]");
    DiffBoundCheck out{};
    if (beta > alpha) {
        std::swap(alpha, beta);
        out.swapped = true;
    }
    if (!(beta >= delta / 2.0))
        throw std::invalid_argument("frac_lap_diff_check: requires delta/2 <= beta");

    double lhs_sq = 0.0;
    for_each_mode(u.grid(), [&](std::size_t idx, int kx, int ky, int kz) {
        const double ksq = double(kx) * kx + double(ky) * ky + double(kz) * kz;
        if (ksq == 0.0) return;
        const double d = std::pow(ksq, alpha) - std::pow(ksq, beta);
        double mag = 0.0;
        for (int c = 0; c < 3; ++c) mag += std::norm(u.at(c, idx));
        lhs_sq += std::pow(1.0 + ksq, s) * d * d * mag;
    });
    out.lhs = std::sqrt(kTwoPi * kTwoPi * kTwoPi * lhs_sq);
    out.rhs = ledger.c2_lemma * std::pow(alpha - beta, delta) *
              sobolev_norm_hs(u, s + 2.0 * alpha + delta);
    out.ratio = out.rhs == 0.0 ? 0.0 : out.lhs / out.rhs;
    return out;
}

double permode_diff_bound_scan(double alpha, double beta, double delta, int k_max,
                               const ConstantsLedger& ledger) {
    ledger.validate();
    if (!(delta > 0.0) || delta > 1.0)
        throw std::invalid_argument("permode_diff_bound_scan: delta must lie in (0,1]");
    if (beta > alpha) std::swap(alpha, beta);
    if (alpha == beta) return 0.0;
    const double denom_const =
        ledger.c2_lemma * ledger.c2_lemma * std::pow(alpha - beta, 2.0 * delta);
    double worst = 0.0;
    // The bound depends on k only through |k|^2; scan every integer value.
    for (long m = 1; m <= static_cast<long>(k_max) * k_max; ++m) {
        const double ksq = static_cast<double>(m);
        const double d = std::pow(ksq, alpha) - std::pow(ksq, beta);
        const double ratio = d * d / (denom_const * std::pow(1.0 + ksq, 2.0 * alpha + delta));
        worst = std::max(worst, ratio);
    }
    return worst;
}

GronwallSpec GronwallSpec::make(double s, double alpha, double beta, double delta,
                                const ConstantsLedger& ledger) {
    ledger.validate();
    if (!(delta > 0.0) || delta > 1.0)
        throw std::invalid_argument("GronwallSpec: delta must lie in (0,1]");
    if (s <= 1.0 && !(s > 2.5 - 2.0 * alpha))
        throw std::invalid_argument("GronwallSpec: requires s > 5/2 - 2 alpha");
    const double slack = 0.5 * std::min(delta, 0.5 * (s - (2.5 - 2.0 * alpha)));
    if (std::abs(alpha - beta) > slack + 1e-15)
        throw std::invalid_argument("GronwallSpec: |alpha - beta| exceeds the admissible band");

    GronwallSpec spec;
    spec.s = s;
    spec.alpha = alpha;
    spec.beta = beta;
    spec.delta = delta;
    spec.ledger = ledger;
    spec.gamma = gamma_exponent(s, beta);
    spec.c0 = constant_c0(s, beta, ledger).value;
    spec.c1 = constant_c1(s, ledger);
    spec.c2 = ledger.c2_lemma;
    return spec;
}

GronwallBound gronwall_bound(const GronwallSpec& spec, double f0) {
    if (!(f0 >= 0.0)) throw std::invalid_argument("gronwall_bound: f0 must be >= 0");
    const std::size_t m = spec.times.size();
    if (m < 2) throw std::invalid_argument("gronwall_bound: forcing series too short");
    if (spec.grad_hs_sq.size() != m || spec.u_hsad_sq.size() != m)
        throw std::invalid_argument("gronwall_bound: forcing series gap (length mismatch)");
    for (std::size_t i = 1; i < m; ++i)
        if (!(spec.times[i] > spec.times[i - 1]))
            throw std::invalid_argument("gronwall_bound: times must be strictly increasing");

    const double drive = spec.c2 * std::pow(std::abs(spec.alpha - spec.beta), spec.delta);
    auto rhs = [&](double F, double g, double h) {
        return spec.c0 * std::pow(F, spec.gamma) + spec.c1 * g * F + drive * h;
    };

    GronwallBound out;
    out.values.assign(m, kInf);
    out.values[0] = f0;
    double F = f0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double dt = spec.times[i + 1] - spec.times[i];
        const double g0 = spec.grad_hs_sq[i], g1 = spec.grad_hs_sq[i + 1];
        const double h0 = spec.u_hsad_sq[i], h1 = spec.u_hsad_sq[i + 1];
        const double gm = 0.5 * (g0 + g1), hm = 0.5 * (h0 + h1);
        const double k1 = rhs(F, g0, h0);
        const double k2 = rhs(F + 0.5 * dt * k1, gm, hm);
        const double k3 = rhs(F + 0.5 * dt * k2, gm, hm);
        const double k4 = rhs(F + dt * k3, g1, h1);
        F += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(F) || F > kBlowupCeiling) {
            out.blowup_time = spec.times[i + 1];
            return out;
        }
        out.values[i + 1] = F;
    }
    return out;
}

double epsilon_local(const GronwallSpec& spec, double T, double norm_hs1_sq,
                     double norm_hsad_sq) {
    if (!(T > 0.0)) throw std::invalid_argument("epsilon_local: T must be > 0");
    if (!(norm_hs1_sq >= 0.0) || !(norm_hsad_sq >= 0.0))
        throw std::invalid_argument("epsilon_local: forcing norms must be >= 0");
    const double term1 = spec.delta / 2.0;
    const double term2 = 0.25 * (spec.s - (2.5 - 2.0 * spec.alpha));
    const double gm1 = spec.gamma - 1.0;
    const double term3 = std::max(1.0, spec.c2 * norm_hsad_sq) *
                         std::pow(spec.c0 * gm1 * T, -1.0 / gm1) *
                         std::exp(-spec.c1 * (norm_hs1_sq + norm_hsad_sq));
    return std::min({term1, term2, term3});
}

Epsilon54 epsilon_54(double M, double delta, const ConstantsLedger& ledger) {
    ledger.validate();
    if (!(M >= 0.0)) throw std::invalid_argument("epsilon_54: M must be >= 0");
    if (!(delta > 0.0) || delta > 1.0)
        throw std::invalid_argument("epsilon_54: delta must lie in (0,1]");

    const double cb = ledger.c_bar, db = ledger.d_bar;
    const double term1 = std::pow(delta / 4.0, 1.0 / delta);

    // ln of 48 db cb^2 exp(M^{5/2} cb^3 / e) max{2 C2 S, 1} exp(144 db^2 cb^6 S)
    // with S = M^2 (1 + M^4 exp(c_a M^2)); S overflows quickly, so assemble in
    // log space and give up on the value (keeping its log10) when even the
    // exponent is unrepresentable.
    double ln_base;
    if (M == 0.0) {
        ln_base = std::log(48.0 * db * cb * cb);
    } else {
        const double lnM = std::log(M);
        const double t = ledger.c_a() * M * M + 4.0 * lnM;  // ln(M^4 e^{c_a M^2})
        const double lnS = 2.0 * lnM + (t > 700.0 ? t : std::log1p(std::exp(t)));
        const double S = lnS < 708.0 ? std::exp(lnS) : kInf;
        ln_base = std::log(48.0 * db * cb * cb) + std::pow(M, 2.5) * cb * cb * cb / std::exp(1.0) +
                  std::max(0.0, std::log(2.0 * ledger.c2_lemma) + lnS) +
                  144.0 * db * db * std::pow(cb, 6) * S;
    }

    Epsilon54 out{};
    if (!std::isfinite(ln_base)) {
        out.value = 0.0;
        out.log10_value = -kInf;
        out.underflow = true;
        return out;
    }
    const double ln_term2 = -ln_base / delta;
    const double term2 = ln_term2 > -708.0 ? std::exp(ln_term2) : 0.0;
    if (term2 == 0.0) {
        out.value = 0.0;
        out.log10_value = ln_term2 / kLn10;
        out.underflow = true;
        return out;
    }
    out.value = std::min(term1, term2);
    out.log10_value = std::log10(out.value);
    out.underflow = false;
    return out;
}

double leray_time_h1(double grad_norm, double alpha, const ConstantsLedger& ledger) {
    ledger.validate();
    if (!(grad_norm > 0.0)) throw std::invalid_argument("leray_time_h1: norm must be > 0");
    if (!(alpha > 0.75) || alpha > 1.25)
        throw std::domain_error("leray_time_h1: alpha must lie in (3/4, 5/4]");
    const double q = 4.0 * alpha - 3.0;
    return std::pow(ledger.c_bar, -6.0 / q) * std::pow(grad_norm, -4.0 * alpha / q);
}

double leray_time_halpha(double halpha_norm, double alpha, const ConstantsLedger& ledger) {
    ledger.validate();
    if (!(halpha_norm > 0.0)) throw std::invalid_argument("leray_time_halpha: norm must be > 0");
    if (!(alpha > 5.0 / 6.0) || !(alpha < 1.0))
        throw std::domain_error("leray_time_halpha: alpha must lie in (5/6, 1)");
    const double q = 6.0 * alpha - 5.0;
    const double c1 = std::pow(1.0 + ledger.d_bar, -4.0 * alpha / q) *
                      std::pow(ledger.c_bar, (4.0 * alpha - 10.0) / q);
    return c1 * std::pow(halpha_norm, -4.0 * alpha / q);
}

TstarResult tstar(double M, double alpha, const ConstantsLedger& ledger, double /*p*/) {
    ledger.validate();
    if (!(M > 0.0)) throw std::invalid_argument("tstar: M must be > 0");
    if (!(alpha > 5.0 / 6.0) || !(alpha < 1.25))
        throw std::domain_error("tstar: alpha must lie in (5/6, 5/4)");

    TstarResult out{};
    const double r = 5.0 - 4.0 * alpha;
    if (alpha < 1.0) {
        out.branch = "ipodissipative";
        const double q = 6.0 * alpha - 5.0;
        const double c1 = std::pow(1.0 + ledger.d_bar, -4.0 * alpha / q) *
                          std::pow(ledger.c_bar, (4.0 * alpha - 10.0) / q);
        out.threshold = std::pow(M, 4.0 * alpha / r) * std::pow(2.0, -2.0 * alpha / r) *
                        std::pow(c1, -q / r);
        out.log10_cap = 0.0;
    } else {
        out.branch = "hyperdissipative";
        const double c2 = std::pow(ledger.c_bar, -6.0 / (4.0 * alpha - 3.0));
        out.threshold = std::pow(M, 4.0 * alpha / r) * std::pow(2.0, -2.0 / r) *
                        std::pow(c2, -(4.0 * alpha - 3.0) / r);
        const double ln_cap =
            (2.0 / r) * std::log(0.5 * r * std::pow(ledger.c_bar, 3) * std::pow(M, 2.0 * alpha));
        out.log10_cap = ln_cap / kLn10;
        out.improved_cap = ln_cap > -708.0 ? std::exp(ln_cap) : 0.0;
        // Eq-level consistency: the improved bound never exceeds the iteration
        // threshold on the shared branch.
        if (*out.improved_cap > out.threshold * (1.0 + 1e-12))
            throw std::logic_error("tstar: improved cap exceeds iteration threshold");
    }
    return out;
}

WeakStrongRegime weak_strong_regime(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.5))
        throw std::domain_error("weak_strong_regime: alpha must lie in (0, 3/2)");
    WeakStrongRegime out{};
    if (alpha >= 1.0) {
        out.index = 1;
        out.conditions = {"v in L^2((0,T), L^{3/(alpha-1)})"};
        out.classical_boundary = alpha == 1.0;
    } else if (alpha >= 0.75) {
        out.index = 2;
        out.conditions = {"(-Delta)^{(1-alpha)/2} v in L^2((0,T), L^inf)"};
    } else {
        out.index = 3;
        out.conditions = {"(-Delta)^{(1-alpha)/2} v in L^2((0,T), L^inf)",
                          "v in L^2((0,T), L^{3/alpha})"};
    }
    return out;
}

InequalityProbe interpolation_gradient_check(const SpectralField& u, double s, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("interpolation_gradient_check: beta must be > 0");
    if (s < 1.0 - beta || s > 1.0)
        throw std::invalid_argument("interpolation_gradient_check: requires 1-beta <= s <= 1");
    const double theta = (1.0 - s) / beta;
    const double lhs = sobolev_norm(u, NormConvention::homogeneous(1.0));
    const double hi = sobolev_norm(u, NormConvention::homogeneous(s + beta));
    const double lo = sobolev_norm(u, NormConvention::homogeneous(s));
    const double rhs = std::pow(hi, theta) * std::pow(lo, 1.0 - theta);
    InequalityProbe out{lhs, rhs, 0.0};
    out.margin = rhs == 0.0 ? 0.0 : (rhs - lhs) / rhs;
    return out;
}

InequalityProbe interpolation_sobolev_check(const SpectralField& u, double beta) {
    if (!(beta >= 0.75) || !(beta < 1.5))
        throw std::invalid_argument("interpolation_sobolev_check: beta must lie in [3/4, 3/2)");
    const double theta = 3.0 / (2.0 * beta) - 1.0;
    const double lhs = sobolev_norm(u, NormConvention::homogeneous(1.5 - beta));
    const double hi = sobolev_norm(u, NormConvention::homogeneous(beta));
    const double lo = sobolev_norm(u, NormConvention::l2());
    const double rhs = std::pow(hi, theta) * std::pow(lo, 1.0 - theta);
    InequalityProbe out{lhs, rhs, 0.0};
    out.margin = rhs == 0.0 ? 0.0 : (rhs - lhs) / rhs;
    return out;
}

}  // namespace fracns
