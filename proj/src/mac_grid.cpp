#include "drlm/mac_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace drlm {

MacGrid::MacGrid(int nx, int ny, double xmin, double xmax, double ymin, double ymax)
    : nx_(nx), ny_(ny), xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax),
      hx_((xmax - xmin) / nx), hy_((ymax - ymin) / ny)
{
}

MacGrid MacGrid::make(int nx, int ny) { return make(nx, ny, 0.0, 1.0, 0.0, 1.0); }

MacGrid MacGrid::make(int nx, int ny, double xmin, double xmax, double ymin, double ymax)
{
    if (nx < 2 || ny < 2) {
        throw std::invalid_argument("MacGrid: need at least 2 cells per direction, got " +
                                    std::to_string(nx) + "x" + std::to_string(ny));
    }
    if (!(xmax > xmin) || !(ymax > ymin)) {
        throw std::invalid_argument("MacGrid: empty domain");
    }
    return MacGrid(nx, ny, xmin, xmax, ymin, ymax);
}

Array2D::Array2D(int ilo, int ihi, int jlo, int jhi, double value)
    : ilo_(ilo), ihi_(ihi), jlo_(jlo), jhi_(jhi), nj_(jhi - jlo + 1),
      data_(static_cast<std::size_t>(ihi - ilo + 1) * static_cast<std::size_t>(jhi - jlo + 1), value)
{
}

void Array2D::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

VelocityField::VelocityField(const MacGrid& grid)
    : nx(grid.nx()), ny(grid.ny()),
      u(-1, grid.nx() + 1, -1, grid.ny()),
      v(-1, grid.nx(), -1, grid.ny() + 1)
{
}

namespace {

void check_same(const VelocityField& a, const VelocityField& b)
{
    if (a.nx != b.nx || a.ny != b.ny) {
        throw std::invalid_argument("VelocityField: grid mismatch");
    }
}

void add_scaled(std::vector<double>& x, double s, const std::vector<double>& y)
{
    for (std::size_t k = 0; k < x.size(); ++k) {
        x[k] += s * y[k];
    }
}

} // namespace

VelocityField& VelocityField::operator+=(const VelocityField& other) { return axpy(1.0, other); }
VelocityField& VelocityField::operator-=(const VelocityField& other) { return axpy(-1.0, other); }

VelocityField& VelocityField::operator*=(double s)
{
    for (double& x : u.data()) x *= s;
    for (double& x : v.data()) x *= s;
    return *this;
}

VelocityField& VelocityField::axpy(double s, const VelocityField& other)
{
    check_same(*this, other);
    add_scaled(u.data(), s, other.u.data());
    add_scaled(v.data(), s, other.v.data());
    return *this;
}

VelocityField operator+(VelocityField a, const VelocityField& b) { return a += b; }
VelocityField operator-(VelocityField a, const VelocityField& b) { return a -= b; }
VelocityField operator*(double s, VelocityField a) { return a *= s; }

CellField::CellField(const MacGrid& grid)
    : nx(grid.nx()), ny(grid.ny()), values(0, grid.nx() - 1, 0, grid.ny() - 1)
{
}

CellField& CellField::axpy(double s, const CellField& other)
{
    if (nx != other.nx || ny != other.ny) {
        throw std::invalid_argument("CellField: grid mismatch");
    }
    add_scaled(values.data(), s, other.values.data());
    mean_zero = mean_zero && other.mean_zero;
    return *this;
}

CellField& CellField::operator*=(double s)
{
    for (double& x : values.data()) x *= s;
    return *this;
}

void apply_velocity_bc(VelocityField& w)
{
    const int nx = w.nx;
    const int ny = w.ny;
    auto& u = w.u;
    auto& v = w.v;

    for (int j = -1; j <= ny; ++j) {
        u(0, j) = 0.0;
        u(nx, j) = 0.0;
    }
    for (int i = 0; i <= nx; ++i) {
        u(i, -1) = -u(i, 0);
        u(i, ny) = -u(i, ny - 1);
    }
    for (int j = -1; j <= ny; ++j) {
        u(-1, j) = -u(1, j);
        u(nx + 1, j) = -u(nx - 1, j);
    }

    for (int i = -1; i <= nx; ++i) {
        v(i, 0) = 0.0;
        v(i, ny) = 0.0;
    }
    for (int j = 0; j <= ny; ++j) {
        v(-1, j) = -v(0, j);
        v(nx, j) = -v(nx - 1, j);
    }
    for (int i = -1; i <= nx; ++i) {
        v(i, -1) = -v(i, 1);
        v(i, ny + 1) = -v(i, ny - 1);
    }
}

VelocityField with_velocity_bc(VelocityField field)
{
    apply_velocity_bc(field);
    return field;
}

double cell_mean(const CellField& p)
{
    double sum = 0.0;
    for (double x : p.values.data()) sum += x;
    return sum / static_cast<double>(p.values.data().size());
}

CellField project_mean_zero(CellField p)
{
    const double mean = cell_mean(p);
    for (double& x : p.values.data()) x -= mean;
    p.mean_zero = true;
    return p;
}

double max_abs(const CellField& p)
{
    double m = 0.0;
    for (double x : p.values.data()) m = std::max(m, std::abs(x));
    return m;
}

double max_abs_interior(const VelocityField& w)
{
    double m = 0.0;
    for (int i = 1; i < w.nx; ++i)
        for (int j = 0; j < w.ny; ++j) m = std::max(m, std::abs(w.u(i, j)));
    for (int i = 0; i < w.nx; ++i)
        for (int j = 1; j < w.ny; ++j) m = std::max(m, std::abs(w.v(i, j)));
    return m;
}

} // namespace drlm
