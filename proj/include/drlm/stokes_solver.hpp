#pragma once

#include "drlm/mac_grid.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace drlm {

namespace detail {
class VelocityOperatorSolver;
class NeumannPoissonSolver;
} // namespace detail

struct StokesOptions {
    /// Relative tolerance of the pressure Schur-complement iteration.
    double tol = 1e-10;
    int max_iterations = 1000;
};

/// Discrete solution of (alpha I - nu L) u + G p = g, D u = 0.
struct StokesSolution {
    VelocityField velocity;
    CellField pressure;
    /// ||(alpha I - nu L) u + G p - g||_0
    double momentum_residual = 0.0;
    /// ||D u||_0
    double divergence_residual = 0.0;
    double divergence_inf = 0.0;
    int iterations = 0;
};

/// Thrown when the pressure iteration does not reach its tolerance.
class StokesNonConvergence : public std::runtime_error {
public:
    StokesNonConvergence(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), residual_history(std::move(history))
    {
    }
    std::vector<double> residual_history;
};

/// Generalized Stokes operator with fixed alpha = 1/tau and viscosity nu.
///
/// The velocity block alpha I - nu L is constant for a whole run, so its
/// inverse is set up once (a sine-transform diagonalization) and reused by
/// every solve. Pressure is found by preconditioned conjugate gradients on the
/// Schur complement -D A^{-1} G, preconditioned with the Cahouet-Chabard
/// approximation nu I + alpha (-D G)^{-1}. Each solve is const and
/// thread-safe.
class StokesOperator {
public:
    StokesOperator(const MacGrid& grid, double alpha, double nu, StokesOptions options = {});
    ~StokesOperator();
    StokesOperator(StokesOperator&&) noexcept;
    StokesOperator& operator=(StokesOperator&&) noexcept;

    const MacGrid& grid() const { return grid_; }
    double alpha() const { return alpha_; }
    double nu() const { return nu_; }
    const StokesOptions& options() const { return options_; }

    StokesSolution solve(const VelocityField& g) const;

    /// (alpha I - nu L) w on interior faces; w must have its ghosts filled.
    VelocityField apply_velocity_operator(const VelocityField& w) const;
    /// Exact inverse of the velocity block on interior faces. Result is bc-applied.
    VelocityField solve_velocity_block(const VelocityField& rhs) const;

    /// Residual norms of a candidate (u, p) for right-hand side g.
    void fill_residuals(StokesSolution& sol, const VelocityField& g) const;

private:
    MacGrid grid_;
    double alpha_;
    double nu_;
    StokesOptions options_;
    std::unique_ptr<detail::VelocityOperatorSolver> velocity_solver_;
    std::unique_ptr<detail::NeumannPoissonSolver> poisson_solver_;
};

/// Largest grid, per direction, accepted by dense_oracle_solve.
inline constexpr int kDenseOracleMaxCells = 16;

/// Assembles the full saddle-point matrix [[alpha I - nu L, G], [D, 0]] from
/// the stencil coefficients, pins one pressure value, and solves it by dense
/// LU. Pressure is mean-projected afterwards. Independent of the iterative
/// path. Throws std::invalid_argument above kDenseOracleMaxCells.
StokesSolution dense_oracle_solve(const StokesOperator& op, const VelocityField& g);

} // namespace drlm
