#include "drlm/stokes_solver.hpp"

#include <Eigen/Dense>

#include <string>

namespace drlm {

StokesSolution dense_oracle_solve(const StokesOperator& op, const VelocityField& g)
{
    const MacGrid& grid = op.grid();
    const int nx = grid.nx();
    const int ny = grid.ny();
    if (nx > kDenseOracleMaxCells || ny > kDenseOracleMaxCells) {
        throw std::invalid_argument("dense_oracle_solve: grid " + std::to_string(nx) + "x" +
                                    std::to_string(ny) + " exceeds the dense-oracle limit");
    }
    if (!g.same_shape(grid)) {
        throw std::invalid_argument("dense_oracle_solve: right-hand side does not match grid");
    }

    const int nu_dofs = grid.num_u_dofs();
    const int nv_dofs = grid.num_v_dofs();
    const int np_dofs = grid.num_cells();
    const int n = nu_dofs + nv_dofs + np_dofs;
    const int v0 = nu_dofs;
    const int p0 = nu_dofs + nv_dofs;

    const double alpha = op.alpha();
    const double nu = op.nu();
    const double cx = nu / (grid.hx() * grid.hx());
    const double cy = nu / (grid.hy() * grid.hy());

    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);

    // x-momentum on interior u-faces. Neighbours across a wall-normal face are
    // zero; tangential neighbours beyond the wall are odd reflections, which
    // adds one more cy to the diagonal.
    for (int i = 1; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const int row = grid.u_dof(i, j);
            double diag = alpha + 2.0 * cx + 2.0 * cy;
            if (i - 1 >= 1) K(row, grid.u_dof(i - 1, j)) -= cx;
            if (i + 1 <= nx - 1) K(row, grid.u_dof(i + 1, j)) -= cx;
            if (j - 1 >= 0) K(row, grid.u_dof(i, j - 1)) -= cy; else diag += cy;
            if (j + 1 <= ny - 1) K(row, grid.u_dof(i, j + 1)) -= cy; else diag += cy;
            K(row, row) += diag;
            K(row, p0 + grid.cell_dof(i, j)) += 1.0 / grid.hx();
            K(row, p0 + grid.cell_dof(i - 1, j)) -= 1.0 / grid.hx();
            rhs(row) = g.u(i, j);
        }
    }
    for (int i = 0; i < nx; ++i) {
        for (int j = 1; j < ny; ++j) {
            const int row = v0 + grid.v_dof(i, j);
            double diag = alpha + 2.0 * cx + 2.0 * cy;
            if (j - 1 >= 1) K(row, v0 + grid.v_dof(i, j - 1)) -= cy;
            if (j + 1 <= ny - 1) K(row, v0 + grid.v_dof(i, j + 1)) -= cy;
            if (i - 1 >= 0) K(row, v0 + grid.v_dof(i - 1, j)) -= cx; else diag += cx;
            if (i + 1 <= nx - 1) K(row, v0 + grid.v_dof(i + 1, j)) -= cx; else diag += cx;
            K(row, row) += diag;
            K(row, p0 + grid.cell_dof(i, j)) += 1.0 / grid.hy();
            K(row, p0 + grid.cell_dof(i, j - 1)) -= 1.0 / grid.hy();
            rhs(row) = g.v(i, j);
        }
    }
    // Continuity; the row of cell (0, 0) is replaced by the pin p(0, 0) = 0.
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const int row = p0 + grid.cell_dof(i, j);
            if (i == 0 && j == 0) {
                K(row, row) = 1.0;
                continue;
            }
            if (i + 1 <= nx - 1) K(row, grid.u_dof(i + 1, j)) += 1.0 / grid.hx();
            if (i >= 1) K(row, grid.u_dof(i, j)) -= 1.0 / grid.hx();
            if (j + 1 <= ny - 1) K(row, v0 + grid.v_dof(i, j + 1)) += 1.0 / grid.hy();
            if (j >= 1) K(row, v0 + grid.v_dof(i, j)) -= 1.0 / grid.hy();
        }
    }

    const Eigen::VectorXd x = K.partialPivLu().solve(rhs);

    StokesSolution sol;
    sol.velocity = VelocityField(grid);
    sol.pressure = CellField(grid);
    for (int k = 0; k < nu_dofs; ++k) {
        const auto [i, j] = grid.u_dof_ij(k);
        sol.velocity.u(i, j) = x(k);
    }
    for (int k = 0; k < nv_dofs; ++k) {
        const auto [i, j] = grid.v_dof_ij(k);
        sol.velocity.v(i, j) = x(v0 + k);
    }
    for (int k = 0; k < np_dofs; ++k) {
        const auto [i, j] = grid.cell_dof_ij(k);
        sol.pressure(i, j) = x(p0 + k);
    }
    apply_velocity_bc(sol.velocity);
    sol.pressure = project_mean_zero(std::move(sol.pressure));
    op.fill_residuals(sol, g);
    return sol;
}

} // namespace drlm
