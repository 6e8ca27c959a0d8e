#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracns/constants.hpp"
#include "fracns/field.hpp"

namespace fracns {

/// gamma(s, beta) = (6 beta - 5 + 2s) / (4 beta - 5 + 2s); > 1 on the
/// admissible set. Rejects pairs with nonpositive denominator.
double gamma_exponent(double s, double beta);

struct C0Result {
    double value;
    double cap;          // coarse cap 2 (12 (1+d_bar) c_bar^2)^{5/(s-(5/2-2 order))}
    std::string branch;  // "s<1" or "s=1"
};

/// Power-nonlinearity constant C0(s, order). The single order argument plays
/// beta in the closed form and alpha in the coarse cap.
C0Result constant_c0(double s, double order, const ConstantsLedger& ledger);

/// Linear-forcing constant C1(s) = 6 [3 (1+d_bar)^2 c_bar^4 + 2 c_bar^6].
double constant_c1(double s, const ConstantsLedger& ledger);

/// Integer-regularity variant C1(k); no closed form is prescribed, so it is
/// configurable and defaults to the s-branch value.
double constant_c1_hk(int k, const ConstantsLedger& ledger,
                      std::optional<double> override_value = std::nullopt);

struct DiffBoundCheck {
    double lhs;    // ||[(-Delta)^alpha - (-Delta)^beta] u||_{H^s}
    double rhs;    // c2_lemma (alpha-beta)^delta ||u||_{H^{s+2 alpha+delta}}
    double ratio;  // lhs / rhs (0 when both vanish)
    bool swapped;  // true when the orders were given in reverse
};

/// Field-level check of the fractional-symbol difference bound.
DiffBoundCheck frac_lap_diff_check(const SpectralField& u, double alpha, double beta,
                                   double delta, double s, const ConstantsLedger& ledger);

/// Worst per-mode ratio (|k|^{2a}-|k|^{2b})^2 / [c2^2 (a-b)^{2d} (1+|k|^2)^{2a+d}]
/// over all integer |k|^2 <= k_max^2.
double permode_diff_bound_scan(double alpha, double beta, double delta, int k_max,
                               const ConstantsLedger& ledger);

/// Difference-inequality data: orders, derived constants, and the measured
/// forcing series on the logged time grid.
struct GronwallSpec {
    double s = 1.0;
    double alpha = 1.25;
    double beta = 1.25;
    double delta = 1.0;
    ConstantsLedger ledger;

    // Derived via the calculators.
    double gamma = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    // Forcing on the logged grid: g(t) = ||Du(t)||_{H^s}^2, h(t) = ||u(t)||_{H^{s+alpha+delta}}^2.
    std::vector<double> times;
    std::vector<double> grad_hs_sq;
    std::vector<double> u_hsad_sq;

    /// Computes the derived constants and validates admissibility:
    /// s > 5/2 - 2 alpha when s <= 1, and |alpha-beta| <= (1/2) min{delta,
    /// (1/2)(s - (5/2 - 2 alpha))}.
    static GronwallSpec make(double s, double alpha, double beta, double delta,
                             const ConstantsLedger& ledger);
};

struct GronwallBound {
    std::vector<double> values;          // F(t) on the logged grid (inf past blow-up)
    std::optional<double> blowup_time;   // set when F escapes before the horizon
};

/// Integrates the comparison ODE F' = C0 F^gamma + C1 g(t) F + C2 |a-b|^delta h(t)
/// with RK4 on the logged grid (forcing linearly interpolated at half steps).
GronwallBound gronwall_bound(const GronwallSpec& spec, double f0);

/// Local stability radius: the three-way minimum
///   min{ delta/2, (1/4)(s - (5/2 - 2 alpha)),
///        max{1, C2 |u|^2_A} (C0 (gamma-1) T)^{-1/(gamma-1)} exp(-C1 (|u|^2_B + |u|^2_A)) }
/// with |u|^2_A = ||u||^2_{L2([0,T],H^{s+alpha+delta})}, |u|^2_B = ||u||^2_{L2([0,T],H^{s+1})}.
double epsilon_local(const GronwallSpec& spec, double T, double norm_hs1_sq,
                     double norm_hsad_sq);

struct Epsilon54 {
    double value;        // 0 when the radius underflows double precision
    double log10_value;  // always meaningful (-inf if even the log overflows)
    bool underflow;
};

/// Critical-order stability radius epsilon(M, delta); double-exponentially
/// small in M, so the evaluation runs in log domain.
Epsilon54 epsilon_54(double M, double delta, const ConstantsLedger& ledger);

/// Smoothness horizon from the H^1 seminorm, alpha in (3/4, 5/4]:
/// c_bar^{-6/(4a-3)} g^{-4a/(4a-3)}.
double leray_time_h1(double grad_norm, double alpha, const ConstantsLedger& ledger);

/// Smoothness horizon from the critical H^alpha seminorm, alpha in (5/6, 1).
double leray_time_halpha(double halpha_norm, double alpha, const ConstantsLedger& ledger);

struct TstarResult {
    double threshold;   // smallest admissible eventual-regularization horizon
    std::string branch; // "ipodissipative" or "hyperdissipative"
    std::optional<double> improved_cap;  // alpha >= 1 only (0 on underflow)
    double log10_cap;   // meaningful whenever improved_cap is set
};

/// Eventual-regularization horizon T*(M, alpha) for alpha in (5/6, 5/4).
/// The trailing argument is reserved for the partial-regularity branch and is
/// unused by the closed forms.
TstarResult tstar(double M, double alpha, const ConstantsLedger& ledger, double p = 2.0);

struct WeakStrongRegime {
    int index;  // 1, 2, or 3
    std::vector<std::string> conditions;
    bool classical_boundary;  // alpha == 1: exponent 3/(alpha-1) degenerates to L^inf
};

/// Integrability condition granting weak-strong uniqueness at the given order.
WeakStrongRegime weak_strong_regime(double alpha);

struct InequalityProbe {
    double lhs;
    double rhs;
    double margin;  // (rhs - lhs) / rhs, with 0/0 -> 0
};

/// Constant-1 interpolation for the gradient: for 1-beta <= s <= 1,
/// ||grad f|| <= ||(-Delta)^{(s+beta)/2} f||^{(1-s)/beta} ||(-Delta)^{s/2} f||^{1-(1-s)/beta}.
InequalityProbe interpolation_gradient_check(const SpectralField& u, double s, double beta);

/// Constant-1 interpolation in Fourier space: for beta in [3/4, 3/2),
/// ||f||_{Hdot^{3/2-beta}} <= ||(-Delta)^{beta/2} f||^{3/(2 beta)-1} ||f||^{2-3/(2 beta)}.
InequalityProbe interpolation_sobolev_check(const SpectralField& u, double beta);

}  // namespace fracns
