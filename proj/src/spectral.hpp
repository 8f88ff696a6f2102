#pragma once

// Fast diagonalizing solvers for the constant-coefficient MAC operators on a
// uniform grid with no-slip walls. Internal to the Stokes solver.

#include "drlm/mac_grid.hpp"

#include <memory>
#include <vector>

namespace drlm::detail {

/// Owns a pair of FFTW r2r plans (forward and inverse) for an n0 x n1 array
/// and the eigenvalues of the operator they diagonalize.
class SineCosineTransform;

/// Exact solver for (alpha I - nu L) w = g on the velocity unknowns. Each
/// component is diagonalized by a sine transform: DST-I across the direction
/// normal to its faces (Dirichlet on faces) and DST-II along the tangential
/// direction (odd reflection about the wall, half a cell away).
class VelocityOperatorSolver {
public:
    VelocityOperatorSolver(const MacGrid& grid, double alpha, double nu);
    ~VelocityOperatorSolver();
    VelocityOperatorSolver(const VelocityOperatorSolver&) = delete;
    VelocityOperatorSolver& operator=(const VelocityOperatorSolver&) = delete;

    /// Reads interior faces of rhs, returns a bc-applied field.
    VelocityField solve(const VelocityField& rhs) const;

private:
    MacGrid grid_;
    std::unique_ptr<SineCosineTransform> u_transform_;
    std::unique_ptr<SineCosineTransform> v_transform_;
};

/// Pseudo-inverse of the cell operator -divergence(gradient(.)), which is the
/// 5-point Laplacian with homogeneous Neumann closure. Diagonalized by DCT-II
/// in both directions. The constant mode is projected out.
class NeumannPoissonSolver {
public:
    explicit NeumannPoissonSolver(const MacGrid& grid);
    ~NeumannPoissonSolver();
    NeumannPoissonSolver(const NeumannPoissonSolver&) = delete;
    NeumannPoissonSolver& operator=(const NeumannPoissonSolver&) = delete;

    CellField solve(const CellField& rhs) const;

private:
    MacGrid grid_;
    std::unique_ptr<SineCosineTransform> transform_;
};

} // namespace drlm::detail
