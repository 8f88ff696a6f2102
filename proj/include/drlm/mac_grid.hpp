#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace drlm {

/// Uniform marker-and-cell grid on an axis-aligned rectangle.
///
/// Pressure lives at cell centers ((i+1/2)hx, (j+1/2)hy), the x-velocity on
/// vertical faces (i hx, (j+1/2)hy) and the y-velocity on horizontal faces
/// ((i+1/2)hx, j hy). Faces on the boundary carry the normal velocity, which
/// is constrained to zero, so only interior faces are unknowns.
class MacGrid {
public:
    /// Unit-square grid. Throws std::invalid_argument for nx < 2 or ny < 2.
    static MacGrid make(int nx, int ny);
    /// Rectangle [xmin, xmax] x [ymin, ymax].
    static MacGrid make(int nx, int ny, double xmin, double xmax, double ymin, double ymax);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }
    double xmin() const { return xmin_; }
    double ymin() const { return ymin_; }
    double xmax() const { return xmax_; }
    double ymax() const { return ymax_; }
    double cell_area() const { return hx_ * hy_; }
    double area() const { return (xmax_ - xmin_) * (ymax_ - ymin_); }

    double u_x(int i) const { return xmin_ + i * hx_; }
    double u_y(int j) const { return ymin_ + (j + 0.5) * hy_; }
    double v_x(int i) const { return xmin_ + (i + 0.5) * hx_; }
    double v_y(int j) const { return ymin_ + j * hy_; }
    double cell_x(int i) const { return xmin_ + (i + 0.5) * hx_; }
    double cell_y(int j) const { return ymin_ + (j + 0.5) * hy_; }

    // Flat numbering of the unknowns: interior u-faces i in [1, nx-1],
    // interior v-faces j in [1, ny-1], all cells.
    int num_u_dofs() const { return (nx_ - 1) * ny_; }
    int num_v_dofs() const { return nx_ * (ny_ - 1); }
    int num_cells() const { return nx_ * ny_; }

    int u_dof(int i, int j) const { return (i - 1) * ny_ + j; }
    int v_dof(int i, int j) const { return i * (ny_ - 1) + (j - 1); }
    int cell_dof(int i, int j) const { return i * ny_ + j; }
    std::pair<int, int> u_dof_ij(int k) const { return {k / ny_ + 1, k % ny_}; }
    std::pair<int, int> v_dof_ij(int k) const { return {k / (ny_ - 1), k % (ny_ - 1) + 1}; }
    std::pair<int, int> cell_dof_ij(int k) const { return {k / ny_, k % ny_}; }

    bool operator==(const MacGrid&) const = default;

private:
    MacGrid(int nx, int ny, double xmin, double xmax, double ymin, double ymax);

    int nx_;
    int ny_;
    double xmin_;
    double xmax_;
    double ymin_;
    double ymax_;
    double hx_;
    double hy_;
};

/// Dense 2D array over an inclusive index box [ilo, ihi] x [jlo, jhi],
/// stored row-major with j contiguous.
class Array2D {
public:
    Array2D() = default;
    Array2D(int ilo, int ihi, int jlo, int jhi, double value = 0.0);

    double& operator()(int i, int j) { return data_[offset(i, j)]; }
    double operator()(int i, int j) const { return data_[offset(i, j)]; }

    int ilo() const { return ilo_; }
    int ihi() const { return ihi_; }
    int jlo() const { return jlo_; }
    int jhi() const { return jhi_; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    void fill(double value);
    bool operator==(const Array2D&) const = default;

private:
    std::size_t offset(int i, int j) const
    {
        return static_cast<std::size_t>(i - ilo_) * static_cast<std::size_t>(nj_) +
               static_cast<std::size_t>(j - jlo_);
    }

    int ilo_ = 0;
    int ihi_ = -1;
    int jlo_ = 0;
    int jhi_ = -1;
    int nj_ = 0;
    std::vector<double> data_;
};

/// Face-centered velocity with one ghost ring.
///
/// u(i, j): i in [-1, nx+1], j in [-1, ny]; interior faces are i in [1, nx-1].
/// v(i, j): i in [-1, nx], j in [-1, ny+1]; interior faces are j in [1, ny-1].
struct VelocityField {
    VelocityField() = default;
    explicit VelocityField(const MacGrid& grid);

    int nx = 0;
    int ny = 0;
    Array2D u;
    Array2D v;

    bool same_shape(const MacGrid& grid) const { return nx == grid.nx() && ny == grid.ny(); }
    bool operator==(const VelocityField&) const = default;

    VelocityField& operator+=(const VelocityField& other);
    VelocityField& operator-=(const VelocityField& other);
    VelocityField& operator*=(double s);
    /// this += s * other
    VelocityField& axpy(double s, const VelocityField& other);
};

VelocityField operator+(VelocityField a, const VelocityField& b);
VelocityField operator-(VelocityField a, const VelocityField& b);
VelocityField operator*(double s, VelocityField a);

/// Cell-centered scalar, no ghosts.
struct CellField {
    CellField() = default;
    explicit CellField(const MacGrid& grid);

    int nx = 0;
    int ny = 0;
    Array2D values;
    /// Set by project_mean_zero.
    bool mean_zero = false;

    double& operator()(int i, int j) { return values(i, j); }
    double operator()(int i, int j) const { return values(i, j); }

    CellField& axpy(double s, const CellField& other);
    CellField& operator*=(double s);
};

/// Zeroes wall-normal faces and fills tangential ghosts by odd reflection
/// (ghost = -adjacent interior), so the interpolated wall value is zero.
void apply_velocity_bc(VelocityField& field);
VelocityField with_velocity_bc(VelocityField field);

/// Cell average over the grid.
double cell_mean(const CellField& p);
/// Subtracts the cell average. Result has mean_zero set.
CellField project_mean_zero(CellField p);

double max_abs(const CellField& p);
/// Max over interior faces of both components.
double max_abs_interior(const VelocityField& w);

} // namespace drlm
