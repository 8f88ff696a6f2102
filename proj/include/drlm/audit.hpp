#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "drlm/mac_grid.hpp"
#include "drlm/stokes_solver.hpp"

namespace drlm {

struct AuditCheck {
    std::string name;
    bool passed = false;
    /// Worst observed value against its threshold, human readable.
    std::string detail;
};

struct AuditOptions {
    StokesOptions solver{};
    int random_fields = 100;
    int oracle_samples = 20;
    std::uint64_t seed = 20250101;
};

/// Property suites on small grids: operator algebra, bc idempotence,
/// dense-oracle agreement, and the per-step DRLM invariants on a coarse
/// manufactured run plus randomized configurations.
std::vector<AuditCheck> run_invariant_audit(const AuditOptions& options = {});

/// Interior faces uniform in [-1, 1], bc applied.
VelocityField random_velocity(const MacGrid& grid, std::mt19937_64& rng);
CellField random_cell(const MacGrid& grid, std::mt19937_64& rng);

/// Worst relative gap between iterative and dense Stokes solutions over
/// `samples` random right-hand sides on an n x n grid.
struct OracleReport {
    int samples = 0;
    double max_velocity_diff = 0.0;
    double max_pressure_diff = 0.0;
    int max_iterations = 0;
};
OracleReport compare_with_dense_oracle(int n, double alpha, double nu, int samples, const StokesOptions& solver,
                                       std::uint64_t seed);

} // namespace drlm
