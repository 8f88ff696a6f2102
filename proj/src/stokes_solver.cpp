#include "drlm/stokes_solver.hpp"

#include "drlm/operators.hpp"
#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace drlm {

StokesOperator::StokesOperator(const MacGrid& grid, double alpha, double nu, StokesOptions options)
    : grid_(grid), alpha_(alpha), nu_(nu), options_(options)
{
    if (!(alpha > 0.0) || !(nu > 0.0)) {
        throw std::invalid_argument("StokesOperator: alpha and nu must be positive");
    }
    if (!(options.tol > 0.0) || options.tol > 1e-4) {
        throw std::invalid_argument("StokesOperator: tolerance must lie in (0, 1e-4]");
    }
    if (options.max_iterations < 1) {
        throw std::invalid_argument("StokesOperator: max_iterations must be positive");
    }
    velocity_solver_ = std::make_unique<detail::VelocityOperatorSolver>(grid, alpha, nu);
    poisson_solver_ = std::make_unique<detail::NeumannPoissonSolver>(grid);
}

StokesOperator::~StokesOperator() = default;
StokesOperator::StokesOperator(StokesOperator&&) noexcept = default;
StokesOperator& StokesOperator::operator=(StokesOperator&&) noexcept = default;

VelocityField StokesOperator::apply_velocity_operator(const VelocityField& w) const
{
    VelocityField out = laplacian(w, grid_);
    out *= -nu_;
    for (int i = 1; i < grid_.nx(); ++i)
        for (int j = 0; j < grid_.ny(); ++j) out.u(i, j) += alpha_ * w.u(i, j);
    for (int i = 0; i < grid_.nx(); ++i)
        for (int j = 1; j < grid_.ny(); ++j) out.v(i, j) += alpha_ * w.v(i, j);
    return out;
}

VelocityField StokesOperator::solve_velocity_block(const VelocityField& rhs) const
{
    return velocity_solver_->solve(rhs);
}

void StokesOperator::fill_residuals(StokesSolution& sol, const VelocityField& g) const
{
    VelocityField r = apply_velocity_operator(sol.velocity);
    r += gradient(sol.pressure, grid_);
    r -= g;
    sol.momentum_residual = norm_l2(r, grid_);
    const CellField div = divergence(sol.velocity, grid_);
    sol.divergence_residual = norm_l2(div, grid_);
    sol.divergence_inf = max_abs(div);
}

StokesSolution StokesOperator::solve(const VelocityField& g) const
{
    if (!g.same_shape(grid_)) {
        throw std::invalid_argument("StokesOperator::solve: right-hand side does not match grid");
    }

    // Schur system S p = b with S = -D A^{-1} G and b = -D A^{-1} g.
    const VelocityField w0 = velocity_solver_->solve(g);
    CellField r = divergence(w0, grid_);
    r *= -1.0;
    r = project_mean_zero(std::move(r));

    const double ref = norm_l2(r, grid_);
    const double hmin = std::min(grid_.hx(), grid_.hy());
    const double floor = 10.0 * std::numeric_limits<double>::epsilon() * norm_l2(w0, grid_) / hmin;
    const double target = std::max(options_.tol * ref, floor);

    auto precondition = [this](const CellField& res) {
        CellField z = poisson_solver_->solve(res);
        z *= alpha_;
        z.axpy(nu_, res);
        return project_mean_zero(std::move(z));
    };

    StokesSolution sol;
    sol.pressure = CellField(grid_);
    std::vector<double> history{ref};

    double rnorm = ref;
    if (rnorm > target) {
        CellField z = precondition(r);
        CellField d = z;
        double rz = inner_cell(r, z, grid_);
        int it = 0;
        while (rnorm > target) {
            if (it == options_.max_iterations || !std::isfinite(rnorm)) {
                std::ostringstream msg;
                msg << "Stokes pressure iteration did not converge in " << it
                    << " iterations: residual " << rnorm << ", target " << target;
                throw StokesNonConvergence(msg.str(), std::move(history));
            }
            const VelocityField y = velocity_solver_->solve(gradient(d, grid_));
            CellField sd = divergence(y, grid_);
            sd *= -1.0;
            sd = project_mean_zero(std::move(sd));

            const double step = rz / inner_cell(d, sd, grid_);
            sol.pressure.axpy(step, d);
            r.axpy(-step, sd);
            rnorm = norm_l2(r, grid_);
            history.push_back(rnorm);
            ++it;
            if (rnorm <= target) break;

            z = precondition(r);
            const double rz_next = inner_cell(r, z, grid_);
            const double beta = rz_next / rz;
            rz = rz_next;
            d *= beta;
            d.axpy(1.0, z);
        }
        sol.iterations = it;
    }

    sol.pressure = project_mean_zero(std::move(sol.pressure));
    VelocityField rhs = g;
    rhs -= gradient(sol.pressure, grid_);
    sol.velocity = velocity_solver_->solve(rhs);
    fill_residuals(sol, g);
    return sol;
}

} // namespace drlm
