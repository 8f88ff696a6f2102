#pragma once

#include "drlm/mac_grid.hpp"
#include "drlm/operators.hpp"

#include <functional>

namespace drlm {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Pointwise evaluators used to sample data onto the grid.
using VectorFunction = std::function<Vec2(double x, double y, double t)>;
using ScalarFunction = std::function<double(double x, double y, double t)>;

/// Closed-form Navier-Stokes solution on the unit square with no-slip walls:
///
///   u = 5 sin^2(pi x) sin(2 pi y) e^{-t}
///   v = -5 sin(2 pi x) sin^2(pi y) e^{-t}
///   p = cos(pi x) sin(pi y) e^{-t}
///
/// The forcing is the Navier-Stokes residual u_t - nu Lap u + (u.grad)u + grad p,
/// assembled from hand-derived derivatives.
class ExactSolution {
public:
    explicit ExactSolution(double nu) : nu_(nu) {}

    double nu() const { return nu_; }

    Vec2 velocity(double x, double y, double t) const;
    double pressure(double x, double y, double t) const;

    Vec2 velocity_dt(double x, double y, double t) const;
    Vec2 velocity_laplacian(double x, double y, double t) const;
    Vec2 convection(double x, double y, double t) const;
    Vec2 pressure_gradient(double x, double y, double t) const;
    /// Analytic divergence, identically zero up to rounding.
    double divergence(double x, double y, double t) const;

    Vec2 forcing(double x, double y, double t) const;

    VectorFunction velocity_function() const;
    VectorFunction forcing_function() const;
    ScalarFunction pressure_function() const;

private:
    double nu_;
};

/// Samples f at native face locations. Wall-normal faces are sampled too and
/// then zeroed with the ghosts by apply_velocity_bc when apply_bc is set.
VelocityField sample_velocity(const MacGrid& grid, const VectorFunction& f, double t, bool apply_bc = true);
CellField sample_cell(const MacGrid& grid, const ScalarFunction& f, double t);

/// Final-time errors of a discrete (u, p, q) against the exact solution.
struct ErrorNorms {
    DiscreteNorms norms;
    double e_q = 0.0;
};

/// Velocity error against exact samples at faces; pressure error after
/// mean-projecting both the computed and the sampled exact pressure;
/// e_q = q - 1.
ErrorNorms error_norms(const VelocityField& velocity, const CellField& pressure, double q, double t,
                       const MacGrid& grid, const ExactSolution& exact);

/// max over [0, T] of ||f(., t)||_0 on the given grid, sampled at
/// `samples` equispaced times including both ends.
double forcing_sup_l2(const MacGrid& grid, const VectorFunction& forcing, double final_time, int samples = 64);

} // namespace drlm
