#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracns/field.hpp"
#include "fracns/spectral.hpp"

namespace fracns {

struct SolverParams {
    double alpha = 1.25;
    double mollifier_eps = 0.0;
    double dt = 1e-3;
    double t_end = 1.0;
    bool dealias_on = true;
    bool nonlinearity_on = true;
    std::vector<double> record_orders = {1.0};
    double blowup_threshold = 1e6;

    void validate() const {
        if (!(alpha > 0.0) || !(alpha < 1.5))
            throw std::invalid_argument("SolverParams: alpha must lie in (0, 3/2)");
        if (!(mollifier_eps >= 0.0))
            throw std::invalid_argument("SolverParams: mollifier_eps must be >= 0");
        if (!(dt > 0.0) || !(t_end > 0.0) || dt > t_end)
            throw std::invalid_argument("SolverParams: need 0 < dt <= t_end");
        if (record_orders.empty())
            throw std::invalid_argument("SolverParams: record_orders must be nonempty");
        if (!(blowup_threshold > 0.0))
            throw std::invalid_argument("SolverParams: blowup_threshold must be > 0");
    }
};

enum class RunStatus { Completed, BlowupDetected, ResolutionExhausted };

std::string to_string(RunStatus s);

struct TrajectoryReport {
    std::vector<double> times;
    std::vector<double> energy;                // (1/2) ||u(t)||_{L2}^2
    std::vector<double> dissipation_rate;      // ||(-Delta)^{alpha/2} u(t)||_{L2}^2
    std::vector<double> dissipation_integral;  // composite quadrature of the rate
    std::vector<double> record_orders;
    std::vector<std::vector<double>> sobolev_norms;  // [order][step]
    RunStatus status = RunStatus::Completed;
    double dt_used = 0.0;   // after t_end snapping and any CFL halving
    double alpha = 0.0;
    double mollifier_eps = 0.0;
    int grid_n = 0;
    double dealias_fraction = 0.0;
};

/// Thrown when the advective CFL bound dt max|u| N/2 <= 1/2 fails.
struct CflViolation : std::runtime_error {
    explicit CflViolation(double suggested)
        : std::runtime_error("CFL bound violated; halve dt"), suggested_dt(suggested) {}
    double suggested_dt;
};

/// -P[((u * phi_eps) . grad) u], evaluated pseudospectrally: transform to
/// physical space, pointwise product, transform back, dealias, project.
SpectralField nonlinear_term(const SpectralField& u, double eps, bool apply_dealias = true);

/// One time step of the Leray-regularized dynamics. The |k|^{2alpha}
/// dissipation is applied through the exact exponential integrating factor;
/// the nonlinearity advances with classical RK4 weights.
class Integrator {
public:
    Integrator(SpectralField state, SolverParams params);

    const SpectralField& state() const { return state_; }
    double time() const { return time_; }
    const SolverParams& params() const { return params_; }

    /// Advances one step; throws CflViolation when the advective bound fails.
    void advance();

private:
    SpectralField apply_factor(const SpectralField& u, const std::vector<double>& factor) const;
    SpectralField rhs(const SpectralField& u) const;

    SpectralField state_;
    SolverParams params_;
    double time_ = 0.0;
    std::vector<double> half_factor_;  // exp(-|k|^{2alpha} dt/2)
    std::vector<double> full_factor_;  // exp(-|k|^{2alpha} dt)
};

/// Single step convenience wrapper around Integrator.
SpectralField step(const SpectralField& u, const SolverParams& params);

/// Integrates to t_end (dt snapped to divide t_end evenly), logging energy,
/// dissipation, and the requested Sobolev norms at every step. On a CFL
/// rejection the whole run restarts with halved dt. Optional observer is
/// called at every logged state (including t = 0).
using StepObserver = std::function<void(double t, const SpectralField& u)>;
TrajectoryReport run(const SpectralField& u0, const SolverParams& params,
                     const StepObserver& observer = {});

/// Max over t of |E(t) + integral of dissipation - E(0)|; pure
/// time-integration error for the truncated system.
double energy_budget_check(const TrajectoryReport& report);

}  // namespace fracns
