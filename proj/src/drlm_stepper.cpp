#include "drlm/drlm_stepper.hpp"

#include "drlm/operators.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <sstream>

namespace drlm {

namespace {

double max_abs_of(std::initializer_list<double> xs)
{
    double m = 0.0;
    for (double x : xs) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

void RunConfig::validate() const
{
    if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
    if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    if (!(final_time > 0.0)) throw std::invalid_argument("final time must be positive");
    const double ratio = final_time / tau;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(ratio - n) > 4.0 * std::numeric_limits<double>::epsilon() * n) {
        std::ostringstream msg;
        msg << "final time " << final_time << " is not a multiple of tau " << tau;
        throw std::invalid_argument(msg.str());
    }
    if (!forcing) throw std::invalid_argument("forcing evaluator missing");
    if (!initial_velocity) throw std::invalid_argument("initial velocity evaluator missing");
}

int RunConfig::num_steps() const { return static_cast<int>(std::lround(final_time / tau)); }

RunConfig manufactured_config(int n, double theta, double tau, double nu, double final_time)
{
    const ExactSolution exact(nu);
    return RunConfig{.grid = MacGrid::make(n, n),
                     .theta = theta,
                     .nu = nu,
                     .tau = tau,
                     .final_time = final_time,
                     .solver = {},
                     .forcing = exact.forcing_function(),
                     .initial_velocity = exact.velocity_function(),
                     .check_superposition = false};
}

StokesOperator make_stokes_operator(const RunConfig& cfg)
{
    return StokesOperator(cfg.grid, 1.0 / cfg.tau, cfg.nu, cfg.solver);
}

DrlmState initial_state(const RunConfig& cfg)
{
    DrlmState s;
    s.velocity = sample_velocity(cfg.grid, cfg.initial_velocity, 0.0);
    s.pressure = project_mean_zero(CellField(cfg.grid));
    s.q = 1.0;
    s.step = 0;
    s.time = 0.0;
    return s;
}

QuadraticCoefficients quadratic_coefficients(const DrlmState& state, const VelocityField& u1,
                                             const VelocityField& u2, const VelocityField& convection,
                                             const RunConfig& cfg)
{
    const MacGrid& grid = cfg.grid;
    const VelocityField du1 = u1 - state.velocity;
    QuadraticCoefficients k;
    k.a = cfg.theta + 0.5 * inner_l2(u2, u2, grid) + cfg.tau * cfg.nu * h1semi_squared(u2, grid);
    k.b = -inner_l2(du1, u2, grid) - cfg.tau * inner_l2(convection, u1, grid);
    k.c = -cfg.theta * state.q * state.q - 0.5 * inner_l2(du1, du1, grid);
    if (!std::isfinite(k.a) || !std::isfinite(k.b) || !std::isfinite(k.c)) {
        throw std::domain_error("quadratic_coefficients: non-finite coefficient");
    }
    return k;
}

double positive_root(const QuadraticCoefficients& k)
{
    if (!(k.a > 0.0) || !(k.c < 0.0)) {
        std::ostringstream msg;
        msg << "positive_root: need A > 0 and C < 0, got A = " << k.a << ", C = " << k.c;
        throw std::domain_error(msg.str());
    }
    const double sq = std::sqrt(k.b * k.b - 4.0 * k.a * k.c);
    if (k.b <= 0.0) return (-k.b + sq) / (2.0 * k.a);
    return -2.0 * k.c / (k.b + sq);
}

double multiplier_bound_c0(double u0_l2, double cf, double final_time)
{
    if (u0_l2 < 0.0 || cf < 0.0 || final_time < 0.0) {
        throw std::invalid_argument("multiplier_bound_c0: inputs must be non-negative");
    }
    const double ft = cf * final_time;
    return std::sqrt(1.0 + (u0_l2 * u0_l2 + 2.0 * ft * (2.0 * ft + u0_l2 + std::numbers::sqrt2)) / 2.0);
}

StepResult drlm_step(const DrlmState& state, const RunConfig& cfg, const StokesOperator& stokes)
{
    const MacGrid& grid = cfg.grid;
    const double tau = cfg.tau;
    const int next = state.step + 1;
    const double t_next = next * tau;

    const VelocityField f = sample_velocity(grid, cfg.forcing, t_next, false);
    // Reused by the second Stokes solve and by B.
    const VelocityField conv = convection(state.velocity, grid);

    VelocityField g1 = (1.0 / tau) * state.velocity;
    g1 += f;
    const VelocityField g2 = -1.0 * conv;

    StokesSolution s1;
    StokesSolution s2;
    try {
        s1 = stokes.solve(g1);
        s2 = stokes.solve(g2);
    } catch (const std::exception& e) {
        throw StepFailure("step " + std::to_string(next) + ": " + e.what(), next);
    }

    StepResult out;
    StepDiagnostics& d = out.diagnostics;
    d.step = next;
    d.time = t_next;
    d.stokes_iterations_1 = s1.iterations;
    d.stokes_iterations_2 = s2.iterations;

    double q = 0.0;
    try {
        d.coefficients = quadratic_coefficients(state, s1.velocity, s2.velocity, conv, cfg);
        q = positive_root(d.coefficients);
    } catch (const std::exception& e) {
        throw StepFailure("step " + std::to_string(next) + ": " + e.what(), next);
    }
    const auto& k = d.coefficients;
    d.q = q;
    d.quadratic_residual = std::abs((k.a * q + k.b) * q + k.c);
    d.quadratic_scale = max_abs_of({k.a * q * q, k.b * q, k.c});
    d.quadratic_residual_ulps =
        d.quadratic_residual / (std::nextafter(d.quadratic_scale, INFINITY) - d.quadratic_scale);

    DrlmState& s = out.state;
    s.velocity = s1.velocity;
    s.velocity.axpy(q, s2.velocity);
    apply_velocity_bc(s.velocity);
    s.pressure = s1.pressure;
    s.pressure.axpy(q, s2.pressure);
    s.pressure = project_mean_zero(std::move(s.pressure));
    s.q = q;
    s.step = next;
    s.time = t_next;

    if (!std::isfinite(q) || !std::isfinite(max_abs_interior(s.velocity))) {
        throw StepFailure("step " + std::to_string(next) + ": non-finite state", next);
    }

    const VelocityField& u_old = state.velocity;
    const VelocityField& u_new = s.velocity;
    const double theta = cfg.theta;
    const double nu = cfg.nu;
    const double q_old = state.q;

    const double l2_new = inner_l2(u_new, u_new, grid);
    const double l2_old = inner_l2(u_old, u_old, grid);
    const double semi_new = h1semi_squared(u_new, grid);
    const double semi_old = h1semi_squared(u_old, grid);
    const double q_new_term = theta * q * q / tau;
    const double q_old_term = theta * q_old * q_old / tau;
    const double dq_term = theta * (q * q - q_old * q_old) / tau;

    {
        const double work = inner_l2(f, u_new, grid);
        d.energy_residual = std::abs((l2_new - l2_old) / (2.0 * tau) + dq_term + nu * semi_new - work);
        d.energy_scale = max_abs_of({l2_new / (2.0 * tau), l2_old / (2.0 * tau), q_new_term, q_old_term,
                                     nu * semi_new, work});
    }
    {
        const VelocityField du = u_new - u_old;
        const double work = inner_l2(f, du, grid);
        const double kinetic = inner_l2(du, du, grid) / (2.0 * tau);
        const double semi_du = h1semi_squared(du, grid);
        d.skew_defect = q * inner_l2(conv, u_old, grid);
        d.divergence_defect = inner_cell(s.pressure, divergence(u_old, grid), grid);
        const double viscous = 0.5 * nu * (semi_new - semi_old + semi_du);
        const double rhs = work - kinetic - viscous + d.skew_defect - d.divergence_defect;
        d.qdyn_residual = std::abs(dq_term - rhs);
        d.qdyn_scale = max_abs_of({q_new_term, q_old_term, work, kinetic, 0.5 * nu * semi_new,
                                   0.5 * nu * semi_old, 0.5 * nu * semi_du, d.skew_defect,
                                   d.divergence_defect});
    }
    {
        VelocityField lap = laplacian(u_new, grid);
        const VelocityField grad_p = gradient(s.pressure, grid);
        VelocityField r = (1.0 / tau) * (u_new - u_old);
        r.axpy(-nu, lap);
        r.axpy(q, conv);
        r += grad_p;
        r -= f;
        d.momentum_residual = norm_l2(r, grid);
        lap *= nu;
        d.momentum_scale = max_abs_of({norm_l2(u_new, grid) / tau, std::sqrt(l2_old) / tau, norm_l2(lap, grid),
                                       q * norm_l2(conv, grid), norm_l2(grad_p, grid), norm_l2(f, grid)});
    }
    if (cfg.check_superposition) {
        VelocityField g = g1;
        g.axpy(-q, conv);
        try {
            const StokesSolution coupled = stokes.solve(g);
            const VelocityField diff = coupled.velocity - u_new;
            d.superposition_error = max_abs_interior(diff) / std::max(max_abs_interior(u_new), 1e-300);
        } catch (const std::exception& e) {
            throw StepFailure("step " + std::to_string(next) + ": " + e.what(), next);
        }
    }

    const CellField div = divergence(u_new, grid);
    d.divergence_inf = max_abs(div);
    d.velocity_l2 = std::sqrt(l2_new);
    return out;
}

SimulationResult run_simulation(const RunConfig& cfg, const StepObserver& observer)
{
    cfg.validate();
    const StokesOperator stokes = make_stokes_operator(cfg);
    const int n_steps = cfg.num_steps();

    SimulationResult result;
    result.final_state = initial_state(cfg);
    result.diagnostics.reserve(static_cast<std::size_t>(n_steps));
    for (int n = 0; n < n_steps; ++n) {
        try {
            StepResult step = drlm_step(result.final_state, cfg, stokes);
            result.final_state = std::move(step.state);
            result.diagnostics.push_back(step.diagnostics);
        } catch (const StepFailure& e) {
            result.error = e.what();
            return result;
        }
        if (observer) observer(result.final_state, result.diagnostics.back());
    }
    result.completed = true;
    return result;
}

} // namespace drlm
