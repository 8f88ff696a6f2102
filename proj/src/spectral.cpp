#include "spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace drlm::detail {

namespace {

// FFTW planning and plan destruction are not thread-safe; execution is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n) : ptr(static_cast<double*>(fftw_malloc(sizeof(double) * n)))
    {
        if (ptr == nullptr) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    double* ptr;
};

/// Eigenvalues 4/h^2 sin^2(m pi / (2n)) for m = first, first+1, ...
std::vector<double> second_difference_eigenvalues(int count, int first, int n, double h)
{
    std::vector<double> ev(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const double s = std::sin((k + first) * std::numbers::pi / (2.0 * n));
        ev[static_cast<std::size_t>(k)] = 4.0 / (h * h) * s * s;
    }
    return ev;
}

} // namespace

class SineCosineTransform {
public:
    SineCosineTransform(int n0, int n1, fftw_r2r_kind fwd0, fftw_r2r_kind fwd1, fftw_r2r_kind inv0,
                        fftw_r2r_kind inv1, std::vector<double> ev0, std::vector<double> ev1,
                        double shift, double scale, double normalization)
        : n0_(n0), n1_(n1), ev0_(std::move(ev0)), ev1_(std::move(ev1)), shift_(shift), scale_(scale),
          inv_norm_(1.0 / normalization)
    {
        FftwBuffer scratch(size());
        std::lock_guard lock(planner_mutex());
        forward_ = fftw_plan_r2r_2d(n0_, n1_, scratch.ptr, scratch.ptr, fwd0, fwd1, FFTW_ESTIMATE);
        inverse_ = fftw_plan_r2r_2d(n0_, n1_, scratch.ptr, scratch.ptr, inv0, inv1, FFTW_ESTIMATE);
        if (forward_ == nullptr || inverse_ == nullptr) {
            throw std::runtime_error("FFTW planning failed");
        }
    }

    ~SineCosineTransform()
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(inverse_);
    }

    SineCosineTransform(const SineCosineTransform&) = delete;
    SineCosineTransform& operator=(const SineCosineTransform&) = delete;

    std::size_t size() const { return static_cast<std::size_t>(n0_) * static_cast<std::size_t>(n1_); }

    /// In-place: data <- (shift + scale * Lambda)^+ data. Zero eigenvalues map to zero.
    void apply_inverse(double* data) const
    {
        fftw_execute_r2r(forward_, data, data);
        for (int k = 0; k < n0_; ++k) {
            for (int l = 0; l < n1_; ++l) {
                const double denom = shift_ + scale_ * (ev0_[static_cast<std::size_t>(k)] +
                                                        ev1_[static_cast<std::size_t>(l)]);
                double& x = data[static_cast<std::size_t>(k) * static_cast<std::size_t>(n1_) +
                                 static_cast<std::size_t>(l)];
                x = denom == 0.0 ? 0.0 : x * inv_norm_ / denom;
            }
        }
        fftw_execute_r2r(inverse_, data, data);
    }

private:
    int n0_;
    int n1_;
    std::vector<double> ev0_;
    std::vector<double> ev1_;
    double shift_;
    double scale_;
    double inv_norm_;
    fftw_plan forward_ = nullptr;
    fftw_plan inverse_ = nullptr;
};

VelocityOperatorSolver::VelocityOperatorSolver(const MacGrid& grid, double alpha, double nu) : grid_(grid)
{
    const int nx = grid.nx();
    const int ny = grid.ny();
    const double norm = 4.0 * nx * ny;
    u_transform_ = std::make_unique<SineCosineTransform>(
        nx - 1, ny, FFTW_RODFT00, FFTW_RODFT10, FFTW_RODFT00, FFTW_RODFT01,
        second_difference_eigenvalues(nx - 1, 1, nx, grid.hx()),
        second_difference_eigenvalues(ny, 1, ny, grid.hy()), alpha, nu, norm);
    v_transform_ = std::make_unique<SineCosineTransform>(
        nx, ny - 1, FFTW_RODFT10, FFTW_RODFT00, FFTW_RODFT01, FFTW_RODFT00,
        second_difference_eigenvalues(nx, 1, nx, grid.hx()),
        second_difference_eigenvalues(ny - 1, 1, ny, grid.hy()), alpha, nu, norm);
}

VelocityOperatorSolver::~VelocityOperatorSolver() = default;

VelocityField VelocityOperatorSolver::solve(const VelocityField& rhs) const
{
    const int nx = grid_.nx();
    const int ny = grid_.ny();
    VelocityField out(grid_);

    {
        FftwBuffer buf(u_transform_->size());
        for (int i = 1; i < nx; ++i)
            for (int j = 0; j < ny; ++j) buf.ptr[grid_.u_dof(i, j)] = rhs.u(i, j);
        u_transform_->apply_inverse(buf.ptr);
        for (int i = 1; i < nx; ++i)
            for (int j = 0; j < ny; ++j) out.u(i, j) = buf.ptr[grid_.u_dof(i, j)];
    }
    {
        FftwBuffer buf(v_transform_->size());
        for (int i = 0; i < nx; ++i)
            for (int j = 1; j < ny; ++j) buf.ptr[grid_.v_dof(i, j)] = rhs.v(i, j);
        v_transform_->apply_inverse(buf.ptr);
        for (int i = 0; i < nx; ++i)
            for (int j = 1; j < ny; ++j) out.v(i, j) = buf.ptr[grid_.v_dof(i, j)];
    }
    apply_velocity_bc(out);
    return out;
}

NeumannPoissonSolver::NeumannPoissonSolver(const MacGrid& grid) : grid_(grid)
{
    const int nx = grid.nx();
    const int ny = grid.ny();
    transform_ = std::make_unique<SineCosineTransform>(
        nx, ny, FFTW_REDFT10, FFTW_REDFT10, FFTW_REDFT01, FFTW_REDFT01,
        second_difference_eigenvalues(nx, 0, nx, grid.hx()),
        second_difference_eigenvalues(ny, 0, ny, grid.hy()), 0.0, 1.0, 4.0 * nx * ny);
}

NeumannPoissonSolver::~NeumannPoissonSolver() = default;

CellField NeumannPoissonSolver::solve(const CellField& rhs) const
{
    CellField out(grid_);
    FftwBuffer buf(transform_->size());
    const auto& in = rhs.values.data();
    for (std::size_t k = 0; k < in.size(); ++k) buf.ptr[k] = in[k];
    transform_->apply_inverse(buf.ptr);
    auto& o = out.values.data();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] = buf.ptr[k];
    return project_mean_zero(std::move(out));
}

} // namespace drlm::detail
