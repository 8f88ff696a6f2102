#include "drlm/manufactured.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace drlm {

namespace {

constexpr double pi = std::numbers::pi;

} // namespace

Vec2 ExactSolution::velocity(double x, double y, double t) const
{
    const double e = std::exp(-t);
    const double sx = std::sin(pi * x);
    const double sy = std::sin(pi * y);
    return {5.0 * sx * sx * std::sin(2.0 * pi * y) * e, -5.0 * std::sin(2.0 * pi * x) * sy * sy * e};
}

double ExactSolution::pressure(double x, double y, double t) const
{
    return std::cos(pi * x) * std::sin(pi * y) * std::exp(-t);
}

Vec2 ExactSolution::velocity_dt(double x, double y, double t) const
{
    const Vec2 w = velocity(x, y, t);
    return {-w.x, -w.y};
}

Vec2 ExactSolution::velocity_laplacian(double x, double y, double t) const
{
    const double e = std::exp(-t);
    const double sx = std::sin(pi * x);
    const double sy = std::sin(pi * y);
    const double s2x = std::sin(2.0 * pi * x);
    const double s2y = std::sin(2.0 * pi * y);
    const double c2x = std::cos(2.0 * pi * x);
    const double c2y = std::cos(2.0 * pi * y);
    // u_xx = 10 pi^2 cos(2 pi x) sin(2 pi y), u_yy = -20 pi^2 sin^2(pi x) sin(2 pi y)
    const double lap_u = 10.0 * pi * pi * (c2x * s2y - 2.0 * sx * sx * s2y);
    // v_xx = 20 pi^2 sin(2 pi x) sin^2(pi y), v_yy = -10 pi^2 sin(2 pi x) cos(2 pi y)
    const double lap_v = 10.0 * pi * pi * (2.0 * s2x * sy * sy - s2x * c2y);
    return {lap_u * e, lap_v * e};
}

Vec2 ExactSolution::convection(double x, double y, double t) const
{
    const double e = std::exp(-t);
    const double sx = std::sin(pi * x);
    const double sy = std::sin(pi * y);
    const double s2x = std::sin(2.0 * pi * x);
    const double s2y = std::sin(2.0 * pi * y);
    const double c2x = std::cos(2.0 * pi * x);
    const double c2y = std::cos(2.0 * pi * y);
    const Vec2 w = velocity(x, y, t);
    const double ux = 5.0 * pi * s2x * s2y * e;
    const double uy = 10.0 * pi * sx * sx * c2y * e;
    const double vx = -10.0 * pi * c2x * sy * sy * e;
    const double vy = -5.0 * pi * s2x * s2y * e;
    return {w.x * ux + w.y * uy, w.x * vx + w.y * vy};
}

Vec2 ExactSolution::pressure_gradient(double x, double y, double t) const
{
    const double e = std::exp(-t);
    return {-pi * std::sin(pi * x) * std::sin(pi * y) * e, pi * std::cos(pi * x) * std::cos(pi * y) * e};
}

double ExactSolution::divergence(double x, double y, double t) const
{
    const double e = std::exp(-t);
    const double ux = 5.0 * pi * std::sin(2.0 * pi * x) * std::sin(2.0 * pi * y) * e;
    const double vy = -5.0 * pi * std::sin(2.0 * pi * x) * std::sin(2.0 * pi * y) * e;
    return ux + vy;
}

Vec2 ExactSolution::forcing(double x, double y, double t) const
{
    const Vec2 dt = velocity_dt(x, y, t);
    const Vec2 lap = velocity_laplacian(x, y, t);
    const Vec2 conv = convection(x, y, t);
    const Vec2 gp = pressure_gradient(x, y, t);
    return {dt.x - nu_ * lap.x + conv.x + gp.x, dt.y - nu_ * lap.y + conv.y + gp.y};
}

VectorFunction ExactSolution::velocity_function() const
{
    return [self = *this](double x, double y, double t) { return self.velocity(x, y, t); };
}

VectorFunction ExactSolution::forcing_function() const
{
    return [self = *this](double x, double y, double t) { return self.forcing(x, y, t); };
}

ScalarFunction ExactSolution::pressure_function() const
{
    return [self = *this](double x, double y, double t) { return self.pressure(x, y, t); };
}

VelocityField sample_velocity(const MacGrid& grid, const VectorFunction& f, double t, bool apply_bc)
{
    VelocityField w(grid);
    for (int i = 0; i <= grid.nx(); ++i)
        for (int j = 0; j < grid.ny(); ++j) w.u(i, j) = f(grid.u_x(i), grid.u_y(j), t).x;
    for (int i = 0; i < grid.nx(); ++i)
        for (int j = 0; j <= grid.ny(); ++j) w.v(i, j) = f(grid.v_x(i), grid.v_y(j), t).y;
    if (apply_bc) apply_velocity_bc(w);
    return w;
}

CellField sample_cell(const MacGrid& grid, const ScalarFunction& f, double t)
{
    CellField p(grid);
    for (int i = 0; i < grid.nx(); ++i)
        for (int j = 0; j < grid.ny(); ++j) p(i, j) = f(grid.cell_x(i), grid.cell_y(j), t);
    return p;
}

ErrorNorms error_norms(const VelocityField& velocity, const CellField& pressure, double q, double t,
                       const MacGrid& grid, const ExactSolution& exact)
{
    VelocityField eu = velocity;
    eu -= sample_velocity(grid, exact.velocity_function(), t);
    CellField ep = project_mean_zero(pressure);
    ep.axpy(-1.0, project_mean_zero(sample_cell(grid, exact.pressure_function(), t)));

    ErrorNorms out;
    out.norms = norms(eu, ep, grid);
    out.e_q = q - 1.0;
    return out;
}

double forcing_sup_l2(const MacGrid& grid, const VectorFunction& forcing, double final_time, int samples)
{
    if (samples < 2) throw std::invalid_argument("forcing_sup_l2: need at least two samples");
    double sup = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double t = final_time * k / (samples - 1);
        // Walls included: the forcing does not vanish there, but only interior
        // faces enter the L2 inner product.
        const VelocityField f = sample_velocity(grid, forcing, t, false);
        sup = std::max(sup, norm_l2(f, grid));
    }
    return sup;
}

} // namespace drlm
