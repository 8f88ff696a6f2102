#include "drlm/audit.hpp"
#include "drlm/manufactured.hpp"
#include "drlm/operators.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace drlm;

TEST(Operators, DivergenceExactForQuadratics)
{
    // d/dx of x(1-x) is 1 - 2x, matched exactly by the face difference at
    // the cell center; likewise for y.
    const MacGrid g = MacGrid::make(7, 5);
    VelocityField w(g);
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j) w.u(i, j) = g.u_x(i) * (1.0 - g.u_x(i)) * (1.0 + g.u_y(j));
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j <= g.ny(); ++j) w.v(i, j) = 3.0 * g.v_y(j) * (1.0 - g.v_y(j));
    const CellField d = divergence(w, g);
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j) {
            const double x = g.cell_x(i);
            const double y = g.cell_y(j);
            EXPECT_NEAR(d(i, j), (1.0 - 2.0 * x) * (1.0 + y) + 3.0 * (1.0 - 2.0 * y), 1e-12);
        }
}

TEST(Operators, GradientExactForQuadraticsAndZeroOnWalls)
{
    const MacGrid g = MacGrid::make(6, 4);
    CellField p(g);
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j) p(i, j) = g.cell_x(i) * g.cell_x(i) - 2.0 * g.cell_y(j) * g.cell_y(j);
    const VelocityField gp = gradient(p, g);
    for (int i = 1; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j) EXPECT_NEAR(gp.u(i, j), 2.0 * g.u_x(i), 1e-12);
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 1; j < g.ny(); ++j) EXPECT_NEAR(gp.v(i, j), -4.0 * g.v_y(j), 1e-12);
    for (int j = 0; j < g.ny(); ++j) {
        EXPECT_EQ(gp.u(0, j), 0.0);
        EXPECT_EQ(gp.u(g.nx(), j), 0.0);
    }
}

TEST(Operators, LaplacianExactForQuadraticsAwayFromWalls)
{
    const MacGrid g = MacGrid::make(8, 8);
    VelocityField w(g);
    for (int i = -1; i <= g.nx() + 1; ++i)
        for (int j = -1; j <= g.ny(); ++j) w.u(i, j) = g.u_x(i) * g.u_x(i) + 3.0 * g.u_y(j) * g.u_y(j);
    for (int i = -1; i <= g.nx(); ++i)
        for (int j = -1; j <= g.ny() + 1; ++j) w.v(i, j) = g.v_x(i) * g.v_y(j);
    // no bc: the stencil reads whatever ghosts are there
    const VelocityField l = laplacian(w, g);
    for (int i = 1; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j) EXPECT_NEAR(l.u(i, j), 8.0, 1e-9);
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 1; j < g.ny(); ++j) EXPECT_NEAR(l.v(i, j), 0.0, 1e-9);
}

TEST(Operators, RandomFieldAlgebra)
{
    std::mt19937_64 rng(42);
    for (const auto& [nx, ny] : {std::pair{9, 7}, std::pair{4, 12}, std::pair{16, 16}}) {
        const MacGrid g = MacGrid::make(nx, ny, 0.0, 1.5, -0.5, 0.5);
        for (int k = 0; k < 30; ++k) {
            const CellField p = random_cell(g, rng);
            const VelocityField w = random_velocity(g, rng);
            const VelocityField z = random_velocity(g, rng);

            const double lhs = inner_l2(gradient(p, g), w, g);
            const double rhs = -inner_cell(p, divergence(w, g), g);
            EXPECT_NEAR(lhs, rhs, 1e-13 * (std::abs(lhs) + 1.0));

            const double a = inner_l2(laplacian(w, g), z, g);
            const double b = inner_l2(laplacian(z, g), w, g);
            EXPECT_NEAR(a, b, 1e-13 * std::abs(a) + 1e-12);

            const double s2 = h1semi_squared(w, g);
            EXPECT_GT(s2, 0.0);
            EXPECT_NEAR(-inner_l2(laplacian(w, g), w, g), s2, 1e-12 * s2);
            EXPECT_DOUBLE_EQ(h1semi(w, g), std::sqrt(s2));
        }
    }
}

TEST(Operators, SeminormByHand)
{
    // Single interior u-face on a 2x2 grid: u(1,0) = a, u(1,1) = b.
    // Differences: wall-half-spacings 2a/h and 2b/h in y count with weight
    // 1/2 of a full spacing, plus (b - a)/h between them; no x neighbours
    // besides the zero wall faces.
    const MacGrid g = MacGrid::make(2, 2);
    VelocityField w(g);
    const double a = 0.7;
    const double b = -0.4;
    w.u(1, 0) = a;
    w.u(1, 1) = b;
    apply_velocity_bc(w);
    const double h = 0.5;
    const double expected =
        // x: (u(1)-u(0))/h and (u(2)-u(1))/h at both rows, weight h*h
        2.0 * (a * a + b * b) +
        // y interior: (b-a)/h, weight h*h
        (b - a) * (b - a) +
        // y walls: (a - 0)/(h/2) with weight h*(h/2), i.e. 2 a^2
        2.0 * (a * a + b * b);
    EXPECT_NEAR(h1semi_squared(w, g), expected, 1e-14);
    EXPECT_NEAR(-inner_l2(laplacian(w, g), w, g), expected, 1e-14);
    (void)h;
}

TEST(Operators, NormsIgnorePressureConstant)
{
    const MacGrid g = MacGrid::make(5, 5);
    CellField p(g);
    for (double& x : p.values.data()) x = 3.25;
    const VelocityField zero(g);
    const DiscreteNorms n = norms(zero, p, g);
    EXPECT_NEAR(n.l2_p, 0.0, 1e-15);
    EXPECT_EQ(n.l2_u, 0.0);
    EXPECT_EQ(n.h1_u, 0.0);
}

TEST(Operators, NormsOfKnownFields)
{
    const MacGrid g = MacGrid::make(4, 4);
    VelocityField w(g);
    w.u(2, 1) = 2.0;
    apply_velocity_bc(w);
    EXPECT_DOUBLE_EQ(norm_l2(w, g), 2.0 * 0.25);
    CellField p(g);
    p(0, 0) = 1.0;
    p(3, 3) = -1.0;
    EXPECT_DOUBLE_EQ(norm_l2(p, g), std::sqrt(2.0) * 0.25);
    const DiscreteNorms n = norms(w, p, g);
    EXPECT_DOUBLE_EQ(n.h1_u, std::sqrt(n.l2_u * n.l2_u + n.h1semi_u * n.h1semi_u));
}

TEST(Operators, TrilinearMatchesAdvection)
{
    std::mt19937_64 rng(3);
    const MacGrid g = MacGrid::make(6, 9);
    const VelocityField a = random_velocity(g, rng);
    const VelocityField c = random_velocity(g, rng);
    const VelocityField w = random_velocity(g, rng);
    EXPECT_NEAR(trilinear_b(a, c, w, g), inner_l2(advection(a, c, g), w, g), 1e-14);
    EXPECT_EQ(convection(a, g), advection(a, a, g));
}

namespace {

double convection_error(int n)
{
    const ExactSolution ex(0.1);
    const MacGrid g = MacGrid::make(n, n);
    const double t = 0.3;
    const VelocityField u = sample_velocity(g, ex.velocity_function(), t);
    const VelocityField c = convection(u, g);
    double err = 0.0;
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < n; ++j) err = std::max(err, std::abs(c.u(i, j) - ex.convection(g.u_x(i), g.u_y(j), t).x));
    for (int i = 0; i < n; ++i)
        for (int j = 1; j < n; ++j) err = std::max(err, std::abs(c.v(i, j) - ex.convection(g.v_x(i), g.v_y(j), t).y));
    return err;
}

double laplacian_error(int n)
{
    const ExactSolution ex(0.1);
    const MacGrid g = MacGrid::make(n, n);
    const VelocityField u = sample_velocity(g, ex.velocity_function(), 0.0);
    const VelocityField l = laplacian(u, g);
    double err = 0.0;
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < n; ++j)
            err = std::max(err, std::abs(l.u(i, j) - ex.velocity_laplacian(g.u_x(i), g.u_y(j), 0.0).x));
    for (int i = 0; i < n; ++i)
        for (int j = 1; j < n; ++j)
            err = std::max(err, std::abs(l.v(i, j) - ex.velocity_laplacian(g.v_x(i), g.v_y(j), 0.0).y));
    return err;
}

} // namespace

TEST(Operators, SecondOrderConsistencyOnSmoothField)
{
    const double c_rate = std::log2(convection_error(32) / convection_error(64));
    const double l_rate = std::log2(laplacian_error(32) / laplacian_error(64));
    EXPECT_GT(c_rate, 1.8);
    EXPECT_GT(l_rate, 1.8);
}

TEST(Operators, ShapeMismatchThrows)
{
    const MacGrid g = MacGrid::make(4, 4);
    const MacGrid other = MacGrid::make(5, 4);
    EXPECT_THROW(divergence(VelocityField(other), g), std::invalid_argument);
    EXPECT_THROW(gradient(CellField(other), g), std::invalid_argument);
}
