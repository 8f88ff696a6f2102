#pragma once

#include "drlm/mac_grid.hpp"
#include "drlm/manufactured.hpp"
#include "drlm/stokes_solver.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace drlm {

/// Solution triple (u^n, p^n, q^n) at t_n = n tau.
struct DrlmState {
    VelocityField velocity;
    CellField pressure;
    double q = 1.0;
    int step = 0;
    double time = 0.0;
};

/// Coefficients of A q^2 + B q + C = 0 for the next multiplier.
struct QuadraticCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Per-step checks. Every *_residual is absolute; the matching *_scale is
/// the magnitude of the largest term entering that identity.
struct StepDiagnostics {
    int step = 0;  ///< index of the new state (n + 1)
    double time = 0.0;
    double q = 0.0;
    QuadraticCoefficients coefficients;
    double quadratic_residual = 0.0;
    double quadratic_scale = 0.0;
    /// quadratic_residual in units of ulp(quadratic_scale)
    double quadratic_residual_ulps = 0.0;

    /// (|u'|^2 - |u|^2)/(2 tau) + theta (q'^2 - q^2)/tau + nu |u'|_1^2 - (f, u')
    double energy_residual = 0.0;
    double energy_scale = 0.0;

    /// theta (q'^2 - q^2)/tau minus the value obtained by testing the momentum
    /// equation with u' - u. The two discrete defects the continuous identity
    /// drops are kept explicitly: q' b_h(u, u, u), nonzero for the advective
    /// stencil, and (p', D u), nonzero only when u is not discretely
    /// solenoidal (the sampled initial velocity).
    double qdyn_residual = 0.0;
    double qdyn_scale = 0.0;
    double skew_defect = 0.0;
    double divergence_defect = 0.0;

    /// ||(u'-u)/tau - nu L u' + q' N + G p' - f||_0 for the recombined state.
    double momentum_residual = 0.0;
    double momentum_scale = 0.0;

    /// max |u'_resolved - u'| / max |u'| after re-solving the momentum equation
    /// with q' fixed. Negative when the check was not requested.
    double superposition_error = -1.0;

    double divergence_inf = 0.0;
    double velocity_l2 = 0.0;
    int stokes_iterations_1 = 0;
    int stokes_iterations_2 = 0;

    double relative_energy_residual() const { return energy_residual / energy_scale; }
    double relative_qdyn_residual() const { return qdyn_residual / qdyn_scale; }
    double relative_momentum_residual() const { return momentum_residual / momentum_scale; }
    double relative_quadratic_residual() const { return quadratic_residual / quadratic_scale; }
};

struct RunConfig {
    MacGrid grid;
    double theta = 1.0;
    double nu = 0.1;
    double tau = 0.125;
    double final_time = 1.0;
    StokesOptions solver{};
    VectorFunction forcing;
    /// Evaluated at t = 0.
    VectorFunction initial_velocity;
    bool check_superposition = false;

    /// Throws std::invalid_argument on a non-positive theta, nu, tau or a
    /// final time that is not an integer multiple of tau.
    void validate() const;
    int num_steps() const;
};

/// Configuration of the manufactured-solution problem.
RunConfig manufactured_config(int n, double theta, double tau, double nu = 0.1, double final_time = 1.0);

/// Stokes operator with alpha = 1/tau for the given configuration.
StokesOperator make_stokes_operator(const RunConfig& cfg);

/// State at t = 0: sampled initial velocity with bc applied, q = 1, p = 0.
DrlmState initial_state(const RunConfig& cfg);

/// A = theta + |u2|^2/2 + tau nu |u2|_1^2
/// B = -(u1 - u, u2) - tau (N, u1)
/// C = -theta q^2 - |u1 - u|^2/2
/// where N = (u . grad) u is the convection of the current velocity.
QuadraticCoefficients quadratic_coefficients(const DrlmState& state, const VelocityField& u1,
                                             const VelocityField& u2, const VelocityField& convection,
                                             const RunConfig& cfg);

/// The unique positive root for A > 0, C < 0, evaluated on the branch that
/// avoids cancellation. Throws std::domain_error otherwise.
double positive_root(const QuadraticCoefficients& coef);

/// Uniform bound c0 >= 1 on the multiplier for theta >= 1:
/// c0^2 = 1 + (|u0|^2 + 2 cf T (2 cf T + |u0| + sqrt 2)) / 2.
double multiplier_bound_c0(double u0_l2, double cf, double final_time);

class StepFailure : public std::runtime_error {
public:
    StepFailure(const std::string& what, int step) : std::runtime_error(what), step(step) {}
    int step;
};

struct StepResult {
    DrlmState state;
    StepDiagnostics diagnostics;
};

/// One step of the first-order scheme: two Stokes solves sharing `stokes`,
/// the multiplier from the quadratic, recombination, and diagnostics.
/// Throws StepFailure carrying the step index.
StepResult drlm_step(const DrlmState& state, const RunConfig& cfg, const StokesOperator& stokes);

using StepObserver = std::function<void(const DrlmState&, const StepDiagnostics&)>;

struct SimulationResult {
    DrlmState final_state;
    std::vector<StepDiagnostics> diagnostics;
    bool completed = false;
    /// Set when a step failed; diagnostics hold the steps before it.
    std::string error;
};

SimulationResult run_simulation(const RunConfig& cfg, const StepObserver& observer = {});

} // namespace drlm
