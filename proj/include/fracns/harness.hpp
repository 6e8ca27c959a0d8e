#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracns/dynamics.hpp"
#include "fracns/estimates.hpp"
#include "fracns/field.hpp"

namespace fracns {

struct DatumSpec {
    enum class Kind { TaylorGreen, RandomDivFree, File };
    Kind kind = Kind::TaylorGreen;
    /// Optional exact rescaling target: ||u||_{H^order} = value.
    std::optional<double> target_order;
    std::optional<double> target_value;
    std::uint64_t seed = 0;
    double spectrum_slope = 3.0;  // |u_hat(k)| ~ |k|^{-slope} inside the mask
    std::string path;             // Kind::File only
};

/// Builds the initial datum: the Taylor-Green field, a seeded random
/// divergence-free field shaped by spectrum_slope, or a snapshot from disk.
/// Random data are Hermitian-symmetric by construction, Leray-projected, and
/// rescaled exactly to the target norm. Bit-reproducible from the seed.
SpectralField make_datum(const DatumSpec& spec, const GridSpec& grid);

/// Deterministic mean-free Gaussian scalar sample (used by the calibration
/// probe); coefficients shaped by |k|^{-slope} inside the dealias mask.
std::vector<Complex> random_scalar_modes(const GridSpec& grid, double slope, std::uint64_t seed);

struct StabilityReport {
    double alpha = 0.0, beta = 0.0, s = 0.0, delta = 0.0;
    std::vector<double> times;
    std::vector<double> f_series;      // ||(u-v)(t)||_{H^s}^2
    std::vector<double> bound_series;  // comparison-ODE output F(t)
    bool dominated = false;
    std::optional<double> first_violation_time;
    double max_f = 0.0;
    RunStatus u_status = RunStatus::Completed;
    RunStatus v_status = RunStatus::Completed;
    GronwallSpec gronwall;  // constants and measured forcing actually used
};

/// Runs the alpha- and beta-order trajectories in lockstep from u0 and v0,
/// measures f(t) and the forcing norms, integrates the comparison ODE with
/// calculator constants, and reports whether the bound dominates:
/// f(t) <= F(t) (1 + 1e-6) at every logged time.
StabilityReport stability_experiment(const SpectralField& u0, const SpectralField& v0,
                                     double alpha, double beta, double s, double delta,
                                     double T, const SolverParams& base,
                                     const ConstantsLedger& ledger = {});

struct EpsilonProbeRow {
    std::string name;
    double perturbation_hs = 0.0;  // requested ||u0 - v0||_{H^s}
    double beta = 0.0;
    double theta = 0.0;  // ||u0-v0||_{H^s}^2 + |alpha-beta|^delta
    bool dominated = false;
    bool admissible = true;
    double max_f = 0.0;
    double log10_conservatism_54 = 0.0;     // log10(theta) - log10(eps_54)
    double log10_conservatism_local = 0.0;  // log10(theta) - log10(eps_local)
};

struct EpsilonProbeTable {
    double M = 0.0;  // ||u0||_{H^delta}
    double delta = 0.0;
    double T = 0.0;
    Epsilon54 eps54{};
    double eps_local = 0.0;
    std::vector<EpsilonProbeRow> rows;
};

/// Ladder of (perturbation size, beta) stability probes around u0 at order
/// alpha; stability is measured at s = delta. Conservatism ratios compare the
/// probed smallness measure theta against the formula radii and are reported
/// in log10 (the formulas underflow doubles for moderate M).
EpsilonProbeTable epsilon_probe(const SpectralField& u0, double alpha, double delta, double T,
                                const std::vector<std::pair<double, double>>& ladder,
                                const SolverParams& base, const ConstantsLedger& ledger = {},
                                std::uint64_t perturbation_seed = 9000);

/// Estimates the discrete embedding constant sup ||f||_{L^{6/(3-2 alpha)}} /
/// ||f||_{Hdot^alpha} by a running max over random mean-free scalar fields
/// (trial 0 is the deterministic single-mode anchor sin x1).
double calibrate_embedding(double alpha, const GridSpec& grid, int trials, std::uint64_t seed);

/// Simulates u0 for time T on its own grid and the rescaled datum
/// r^{2 alpha - 1} u0(r x) for time T / r^{2 alpha} on the r-times-finer grid
/// (matched step counts); returns the relative L2 defect between the rescaled
/// final states. Rejects rescalings whose modes leave the target mask.
double scaling_symmetry_check(const SpectralField& u0, double alpha, int r, double T,
                              const SolverParams& params);

}  // namespace fracns
