#include "drlm/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace drlm {

namespace {

void require_grid(const VelocityField& w, const MacGrid& grid)
{
    if (!w.same_shape(grid)) {
        throw std::invalid_argument("velocity field does not match grid");
    }
}

void require_grid(const CellField& p, const MacGrid& grid)
{
    if (p.nx != grid.nx() || p.ny != grid.ny()) {
        throw std::invalid_argument("cell field does not match grid");
    }
}

} // namespace

CellField divergence(const VelocityField& vel, const MacGrid& grid)
{
    require_grid(vel, grid);
    CellField div(grid);
    const double rhx = 1.0 / grid.hx();
    const double rhy = 1.0 / grid.hy();
    for (int i = 0; i < grid.nx(); ++i) {
        for (int j = 0; j < grid.ny(); ++j) {
            div(i, j) = (vel.u(i + 1, j) - vel.u(i, j)) * rhx + (vel.v(i, j + 1) - vel.v(i, j)) * rhy;
        }
    }
    return div;
}

VelocityField gradient(const CellField& p, const MacGrid& grid)
{
    require_grid(p, grid);
    VelocityField g(grid);
    const double rhx = 1.0 / grid.hx();
    const double rhy = 1.0 / grid.hy();
    for (int i = 1; i < grid.nx(); ++i)
        for (int j = 0; j < grid.ny(); ++j) g.u(i, j) = (p(i, j) - p(i - 1, j)) * rhx;
    for (int i = 0; i < grid.nx(); ++i)
        for (int j = 1; j < grid.ny(); ++j) g.v(i, j) = (p(i, j) - p(i, j - 1)) * rhy;
    return g;
}

VelocityField laplacian(const VelocityField& vel, const MacGrid& grid)
{
    require_grid(vel, grid);
    VelocityField lap(grid);
    const double rhx2 = 1.0 / (grid.hx() * grid.hx());
    const double rhy2 = 1.0 / (grid.hy() * grid.hy());
    const auto& u = vel.u;
    const auto& v = vel.v;
    for (int i = 1; i < grid.nx(); ++i) {
        for (int j = 0; j < grid.ny(); ++j) {
            lap.u(i, j) = (u(i + 1, j) - 2.0 * u(i, j) + u(i - 1, j)) * rhx2 +
                          (u(i, j + 1) - 2.0 * u(i, j) + u(i, j - 1)) * rhy2;
        }
    }
    for (int i = 0; i < grid.nx(); ++i) {
        for (int j = 1; j < grid.ny(); ++j) {
            lap.v(i, j) = (v(i + 1, j) - 2.0 * v(i, j) + v(i - 1, j)) * rhx2 +
                          (v(i, j + 1) - 2.0 * v(i, j) + v(i, j - 1)) * rhy2;
        }
    }
    return lap;
}

VelocityField advection(const VelocityField& a, const VelocityField& c, const MacGrid& grid)
{
    require_grid(a, grid);
    require_grid(c, grid);
    VelocityField out(grid);
    const double r2hx = 0.5 / grid.hx();
    const double r2hy = 0.5 / grid.hy();

    // u-face (i, j) sits between cells i-1 and i; the four v-faces around it
    // are (i-1, j), (i, j), (i-1, j+1), (i, j+1).
    for (int i = 1; i < grid.nx(); ++i) {
        for (int j = 0; j < grid.ny(); ++j) {
            const double vbar = 0.25 * (a.v(i - 1, j) + a.v(i, j) + a.v(i - 1, j + 1) + a.v(i, j + 1));
            out.u(i, j) = a.u(i, j) * (c.u(i + 1, j) - c.u(i - 1, j)) * r2hx +
                          vbar * (c.u(i, j + 1) - c.u(i, j - 1)) * r2hy;
        }
    }
    for (int i = 0; i < grid.nx(); ++i) {
        for (int j = 1; j < grid.ny(); ++j) {
            const double ubar = 0.25 * (a.u(i, j - 1) + a.u(i + 1, j - 1) + a.u(i, j) + a.u(i + 1, j));
            out.v(i, j) = ubar * (c.v(i + 1, j) - c.v(i - 1, j)) * r2hx +
                          a.v(i, j) * (c.v(i, j + 1) - c.v(i, j - 1)) * r2hy;
        }
    }
    return out;
}

VelocityField convection(const VelocityField& vel, const MacGrid& grid) { return advection(vel, vel, grid); }

double inner_l2(const VelocityField& a, const VelocityField& b, const MacGrid& grid)
{
    require_grid(a, grid);
    require_grid(b, grid);
    double su = 0.0;
    for (int i = 1; i < grid.nx(); ++i)
        for (int j = 0; j < grid.ny(); ++j) su += a.u(i, j) * b.u(i, j);
    double sv = 0.0;
    for (int i = 0; i < grid.nx(); ++i)
        for (int j = 1; j < grid.ny(); ++j) sv += a.v(i, j) * b.v(i, j);
    return (su + sv) * grid.cell_area();
}

double inner_cell(const CellField& a, const CellField& b, const MacGrid& grid)
{
    require_grid(a, grid);
    require_grid(b, grid);
    double s = 0.0;
    const auto& x = a.values.data();
    const auto& y = b.values.data();
    for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
    return s * grid.cell_area();
}

double norm_l2(const VelocityField& w, const MacGrid& grid) { return std::sqrt(inner_l2(w, w, grid)); }
double norm_l2(const CellField& p, const MacGrid& grid) { return std::sqrt(inner_cell(p, p, grid)); }

double h1semi_squared(const VelocityField& w, const MacGrid& grid)
{
    require_grid(w, grid);
    const int nx = grid.nx();
    const int ny = grid.ny();
    const auto& u = w.u;
    const auto& v = w.v;

    // Differences normal to the component: wall-normal faces hold zero.
    double normal = 0.0;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const double du = (i + 1 < nx ? u(i + 1, j) : 0.0) - (i > 0 ? u(i, j) : 0.0);
            normal += du * du;
        }
    }
    double normal_v = 0.0;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const double dv = (j + 1 < ny ? v(i, j + 1) : 0.0) - (j > 0 ? v(i, j) : 0.0);
            normal_v += dv * dv;
        }
    }

    // Tangential differences: neighbours across interior edges, plus the
    // half-spacing difference to the zero wall value, which contributes
    // 2 * w^2 in units of 1/h^2.
    double tangential_u = 0.0;
    for (int i = 1; i < nx; ++i) {
        for (int j = 0; j + 1 < ny; ++j) {
            const double d = u(i, j + 1) - u(i, j);
            tangential_u += d * d;
        }
        tangential_u += 2.0 * (u(i, 0) * u(i, 0) + u(i, ny - 1) * u(i, ny - 1));
    }
    double tangential_v = 0.0;
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const double d = v(i + 1, j) - v(i, j);
            tangential_v += d * d;
        }
        tangential_v += 2.0 * (v(0, j) * v(0, j) + v(nx - 1, j) * v(nx - 1, j));
    }

    const double ax = grid.hy() / grid.hx(); // (1/hx^2) * hx * hy
    const double ay = grid.hx() / grid.hy();
    return (normal + tangential_v) * ax + (normal_v + tangential_u) * ay;
}

double h1semi(const VelocityField& w, const MacGrid& grid) { return std::sqrt(h1semi_squared(w, grid)); }

DiscreteNorms norms(const VelocityField& err, const CellField& perr, const MacGrid& grid)
{
    DiscreteNorms n;
    const double l2sq = inner_l2(err, err, grid);
    const double semisq = h1semi_squared(err, grid);
    n.l2_u = std::sqrt(l2sq);
    n.h1semi_u = std::sqrt(semisq);
    n.h1_u = std::sqrt(l2sq + semisq);
    n.l2_p = norm_l2(perr.mean_zero ? perr : project_mean_zero(perr), grid);
    return n;
}

double trilinear_b(const VelocityField& a, const VelocityField& c, const VelocityField& w,
                   const MacGrid& grid)
{
    return inner_l2(advection(a, c, grid), w, grid);
}

} // namespace drlm
