#pragma once

#include "drlm/mac_grid.hpp"

namespace drlm {

/// Discrete velocity and pressure norms.
struct DiscreteNorms {
    double l2_u = 0.0;
    double h1semi_u = 0.0;
    double h1_u = 0.0;
    double l2_p = 0.0;
};

/// Cell divergence (u(i+1,j)-u(i,j))/hx + (v(i,j+1)-v(i,j))/hy.
CellField divergence(const VelocityField& vel, const MacGrid& grid);

/// Face-normal pressure differences on interior faces; zero on wall faces.
/// Satisfies (gradient(p), w) = -(p, divergence(w)) for w with zero wall-normal values.
VelocityField gradient(const CellField& p, const MacGrid& grid);

/// Component-wise 5-point Laplacian on interior faces. Reads ghost values, so
/// apply_velocity_bc must have been called on vel.
VelocityField laplacian(const VelocityField& vel, const MacGrid& grid);

/// Advective term (a . grad) c at interior faces, centered differences, with
/// the cross component of a averaged from the four surrounding faces.
/// Both arguments need their ghosts filled.
VelocityField advection(const VelocityField& a, const VelocityField& c, const MacGrid& grid);

/// (vel . grad) vel
VelocityField convection(const VelocityField& vel, const MacGrid& grid);

/// Face-weighted L2 inner product over interior faces.
double inner_l2(const VelocityField& a, const VelocityField& b, const MacGrid& grid);
/// Cell-weighted L2 inner product.
double inner_cell(const CellField& a, const CellField& b, const MacGrid& grid);

double norm_l2(const VelocityField& w, const MacGrid& grid);
double norm_l2(const CellField& p, const MacGrid& grid);

/// Squared discrete H1 seminorm: sum of squared face-to-face difference
/// quotients, with half-spacing differences against the zero wall value for
/// tangential components. Equals (-laplacian(w), w) for bc-applied w.
double h1semi_squared(const VelocityField& w, const MacGrid& grid);
double h1semi(const VelocityField& w, const MacGrid& grid);

/// Norms of a velocity error and a pressure error. The pressure error is
/// measured modulo constants.
DiscreteNorms norms(const VelocityField& err, const CellField& perr, const MacGrid& grid);

/// b(a, c, w) = ((a . grad) c, w)
double trilinear_b(const VelocityField& a, const VelocityField& c, const VelocityField& w,
                   const MacGrid& grid);

} // namespace drlm
