// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "drlm/audit.hpp"
#include "drlm/drlm_stepper.hpp"
#include "drlm/harness.hpp"
#include "drlm/manufactured.hpp"
#include "drlm/operators.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <thread>

using namespace drlm;

namespace {

// Published reference errors for the manufactured problem (nu = 0.1, T = 1,
// tau = 2h from 1/8 to 1/128). Rates are listed from the second rung on.
struct RefRow {
    std::array<double, 4> err;   // |e_u|_0, |e_u|_1, |e_p|_0, |e_q|
    std::array<double, 4> rate;  // NaN on the first rung
};

constexpr double X = NAN;

const std::map<double, std::array<RefRow, 5>> kReference{
    {0.1,
     {{{{6.38e-02, 9.78e-01, 9.78e-01, 5.51e-01}, {X, X, X, X}},
       {{1.66e-02, 2.42e-01, 6.47e-01, 4.51e-01}, {1.94, 2.01, 0.60, 0.29}},
       {{9.64e-03, 1.50e-01, 3.50e-01, 2.66e-01}, {0.78, 0.69, 0.89, 0.76}},
       {{4.99e-03, 7.94e-02, 1.81e-01, 1.44e-01}, {0.95, 0.92, 0.95, 0.89}},
       {{2.56e-03, 4.11e-02, 9.27e-02, 7.53e-02}, {0.96, 0.95, 0.97, 0.94}}}}},
    {1.0,
     {{{{3.48e-02, 3.56e-01, 4.21e-01, 9.99e-02}, {X, X, X, X}},
       {{1.29e-02, 1.29e-01, 2.08e-01, 5.77e-02}, {1.43, 1.46, 1.02, 0.79}},
       {{5.51e-03, 5.82e-02, 1.02e-01, 3.04e-02}, {1.23, 1.15, 1.03, 0.92}},
       {{2.51e-03, 2.75e-02, 5.05e-02, 1.55e-02}, {1.13, 1.08, 1.01, 0.97}},
       {{1.20e-03, 1.34e-02, 2.51e-02, 7.84e-03}, {1.06, 1.04, 1.01, 0.98}}}}},
    {10.0,
     {{{{3.39e-02, 3.12e-01, 3.08e-01, 1.06e-02}, {X, X, X, X}},
       {{1.26e-02, 1.13e-01, 1.50e-01, 5.95e-03}, {1.43, 1.47, 1.04, 0.83}},
       {{5.28e-03, 4.94e-02, 7.34e-02, 3.09e-03}, {1.25, 1.19, 1.03, 0.95}},
       {{2.38e-03, 2.29e-02, 3.63e-02, 1.56e-03}, {1.15, 1.11, 1.02, 0.99}},
       {{1.12e-03, 1.10e-02, 1.80e-02, 7.87e-04}, {1.09, 1.06, 1.01, 0.99}}}}},
    {100.0,
     {{{{3.38e-02, 3.08e-01, 2.96e-01, 1.07e-03}, {X, X, X, X}},
       {{1.26e-02, 1.12e-01, 1.44e-01, 5.97e-04}, {1.42, 1.46, 1.04, 0.84}},
       {{5.26e-03, 4.86e-02, 7.04e-02, 3.09e-04}, {1.26, 1.20, 1.03, 0.95}},
       {{2.37e-03, 2.25e-02, 3.48e-02, 1.57e-04}, {1.15, 1.11, 1.02, 0.98}},
       {{1.12e-03, 1.08e-02, 1.73e-02, 7.87e-05}, {1.08, 1.06, 1.01, 1.00}}}}},
};

constexpr double kTol = 1e-10;
constexpr double kIdentityLimit = 10.0 * kTol;

int g_failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail)
{
    fmt::print("[{}] criterion {}: {} -- {}\n", ok ? "PASS" : "FAIL", id, name, detail);
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::array<double, 4> errors_of(const ConvergenceRecord& r)
{
    return {r.err_u_l2, r.err_u_h1, r.err_p_l2, r.err_q};
}

std::array<std::optional<double>, 4> rates_of(const ConvergenceRecord& r)
{
    return {r.rate_u_l2, r.rate_u_h1, r.rate_p_l2, r.rate_q};
}

const char* kQuantity[4] = {"e_u L2", "e_u H1", "e_p L2", "e_q"};

// c0 of a manufactured run on the grid with 1/h cells
double bound_c0(int n, double final_time)
{
    const ExactSolution ex(0.1);
    const MacGrid g = MacGrid::make(n, n);
    const double u0 = norm_l2(sample_velocity(g, ex.velocity_function(), 0.0), g);
    return multiplier_bound_c0(u0, forcing_sup_l2(g, ex.forcing_function(), final_time), final_time);
}

struct StressOutcome {
    SimulationResult sim;
    double c0 = 0.0;
    double velocity_bound = 0.0;
};

StressOutcome stress_run()
{
    RunConfig cfg = manufactured_config(32, 1.0, 0.5, 0.1, 10.0);
    cfg.solver.tol = kTol;
    StressOutcome out;
    out.sim = run_simulation(cfg);
    const double u0 = norm_l2(initial_state(cfg).velocity, cfg.grid);
    const double cf = forcing_sup_l2(cfg.grid, cfg.forcing, cfg.final_time);
    out.c0 = multiplier_bound_c0(u0, cf, cfg.final_time);
    // Summing the discrete energy identity and dropping dissipation:
    // M^2/2 <= |u0|^2/2 + theta + cf T M for M = max |u^n|.
    const double ft = cf * cfg.final_time;
    out.velocity_bound = ft + std::sqrt(ft * ft + u0 * u0 + 2.0 * cfg.theta);
    return out;
}

} // namespace

int main()
{
    StudyConfig study;
    study.solver.tol = kTol;
    study.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    fmt::print("running convergence study ({} worker(s))...\n", study.jobs);
    std::fflush(stdout);
    const std::vector<ConvergenceRecord> records = run_study(study);
    fmt::print("{}\n", format_table(records));

    bool any_failed = false;
    for (const auto& r : records)
        if (r.failed) {
            any_failed = true;
            fmt::print("run theta={} tau={} failed: {}\n", r.theta, r.tau, r.error);
        }

    // 1. Reproduction of the reference table.
    {
        double worst_err = 0.0;
        double worst_rate = 0.0;
        std::string where_err;
        std::string where_rate;
        bool ok = !any_failed && records.size() == 20;
        for (const auto& r : records) {
            const auto ref_it = kReference.find(r.theta);
            if (ref_it == kReference.end()) {
                ok = false;
                continue;
            }
            const int rung = static_cast<int>(std::lround(std::log2(0.125 / r.tau)));
            const RefRow& ref = ref_it->second.at(rung);
            const auto e = errors_of(r);
            const auto rt = rates_of(r);
            for (int q = 0; q < 4; ++q) {
                const double rel = std::abs(e[q] - ref.err[q]) / ref.err[q];
                if (!(rel <= worst_err)) {
                    worst_err = rel;
                    where_err = fmt::format("theta={} tau=1/{} {}", r.theta, std::lround(1 / r.tau), kQuantity[q]);
                }
                if (std::isnan(ref.rate[q])) continue;
                const double dev = rt[q] ? std::abs(*rt[q] - ref.rate[q]) : INFINITY;
                if (!(dev <= worst_rate)) {
                    worst_rate = dev;
                    where_rate = fmt::format("theta={} tau=1/{} {}", r.theta, std::lround(1 / r.tau), kQuantity[q]);
                }
            }
        }
        ok = ok && worst_err <= 0.15 && worst_rate <= 0.15;
        report(1, "reference table reproduction", ok,
               fmt::format("worst error deviation {:.2f}% ({}), worst rate deviation {:.3f} ({}); limits 15%, 0.15",
                           100 * worst_err, where_err, worst_rate, where_rate));
    }

    // 2. Asymptotic first order on the finest rung.
    {
        bool ok = !any_failed;
        double lo = INFINITY;
        double hi = -INFINITY;
        for (const auto& r : records) {
            if (std::abs(r.tau - 1.0 / 128) > 1e-15) continue;
            for (const auto& rt : rates_of(r)) {
                if (!rt) {
                    ok = false;
                    continue;
                }
                lo = std::min(lo, *rt);
                hi = std::max(hi, *rt);
            }
        }
        ok = ok && lo >= 0.85 && hi <= 1.15;
        report(2, "final-rung rates in [0.85, 1.15]", ok, fmt::format("observed range [{:.3f}, {:.3f}]", lo, hi));
    }

    // 3. theta |e_q| independent of theta on the finest rung.
    {
        std::vector<double> scaled;
        std::string values;
        for (const auto& r : records) {
            if (std::abs(r.tau - 1.0 / 128) > 1e-15 || r.theta < 1.0 || r.failed) continue;
            scaled.push_back(r.theta * r.err_q);
            values += fmt::format(" theta={}: {:.4e}", r.theta, r.theta * r.err_q);
        }
        bool ok = scaled.size() == 3;
        double spread = INFINITY;
        if (ok) {
            const auto [mn, mx] = std::minmax_element(scaled.begin(), scaled.end());
            spread = *mx / *mn - 1.0;
            ok = spread <= 0.10;
        }
        report(3, "theta*|e_q| constant across theta in {1,10,100}", ok,
               fmt::format("max/min - 1 = {:.4f} (limit 0.10);{}", spread, values));
    }

    const StressOutcome stress = stress_run();

    // 4. Discrete energy and q-dynamics identities at every step.
    {
        double energy = 0.0;
        double qdyn = 0.0;
        for (const auto& r : records) {
            energy = std::max(energy, r.max_rel_energy_residual);
            qdyn = std::max(qdyn, r.max_rel_qdyn_residual);
        }
        for (const auto& d : stress.sim.diagnostics) {
            energy = std::max(energy, d.relative_energy_residual());
            qdyn = std::max(qdyn, d.relative_qdyn_residual());
        }
        const bool ok = !any_failed && stress.sim.completed && energy <= kIdentityLimit && qdyn <= kIdentityLimit;
        report(4, "energy and q-dynamics identities", ok,
               fmt::format("max relative residual energy {:.3e}, q-dynamics {:.3e} (limit {:.1e}) over {} runs",
                           energy, qdyn, kIdentityLimit, records.size() + 1));
    }

    // 5. Positivity and the uniform bound for theta >= 1.
    {
        bool ok = !any_failed && stress.sim.completed;
        double min_q = INFINITY;
        double worst_ratio = 0.0;
        for (const auto& r : records) {
            min_q = std::min(min_q, r.min_q);
            if (r.theta >= 1.0) {
                const double c0 = bound_c0(static_cast<int>(std::lround(1.0 / r.h)), 1.0);
                worst_ratio = std::max(worst_ratio, r.max_q / c0);
            }
        }
        for (const auto& d : stress.sim.diagnostics) {
            min_q = std::min(min_q, d.q);
            worst_ratio = std::max(worst_ratio, d.q / stress.c0);
        }
        ok = ok && min_q > 0.0 && worst_ratio <= 1.0;
        report(5, "q > 0 and q <= c0 for theta >= 1", ok,
               fmt::format("min q {:.6g}, max q/c0 {:.4f} (stress c0 = {:.4g})", min_q, worst_ratio, stress.c0));
    }

    // 6. Stress run stability.
    {
        bool finite = stress.sim.completed;
        double max_u = 0.0;
        for (const auto& d : stress.sim.diagnostics) {
            finite = finite && std::isfinite(d.q) && std::isfinite(d.velocity_l2);
            max_u = std::max(max_u, d.velocity_l2);
        }
        finite = finite && std::isfinite(max_abs_interior(stress.sim.final_state.velocity)) &&
                 std::isfinite(max_abs(stress.sim.final_state.pressure));
        const bool ok = finite && stress.sim.diagnostics.size() == 20 && max_u <= stress.velocity_bound;
        report(6, "stress run theta=1 tau=1/2 h=1/32 T=10", ok,
               fmt::format("{} steps, finite {}, max |u| {:.4g} (energy bound {:.4g}){}", stress.sim.diagnostics.size(),
                           finite, max_u, stress.velocity_bound,
                           stress.sim.error.empty() ? "" : ", error: " + stress.sim.error));
    }

    // 7. Iterative Stokes solve against the dense direct oracle.
    {
        const StokesOptions opts{.tol = kTol, .max_iterations = 1000};
        const OracleReport r = compare_with_dense_oracle(8, 8.0, 0.1, 20, opts, 20240607);
        const double worst = std::max(r.max_velocity_diff, r.max_pressure_diff);
        report(7, "dense oracle vs iterative Stokes (8x8, 20 rhs)", r.samples == 20 && worst <= 1e-8,
               fmt::format("max |du| {:.3e}, max |dp| {:.3e} (limit 1e-08)", r.max_velocity_diff,
                           r.max_pressure_diff));
    }

    // 8. Operator algebra on random fields.
    {
        std::mt19937_64 rng(777);
        const MacGrid g = MacGrid::make(12, 9);
        double adj = 0.0;
        double sym = 0.0;
        double semi = 0.0;
        for (int k = 0; k < 100; ++k) {
            const CellField p = random_cell(g, rng);
            const VelocityField w = random_velocity(g, rng);
            const VelocityField z = random_velocity(g, rng);
            const VelocityField gp = gradient(p, g);
            const CellField dw = divergence(w, g);
            adj = std::max(adj, std::abs(inner_l2(gp, w, g) + inner_cell(p, dw, g)) /
                                    (norm_l2(gp, g) * norm_l2(w, g) + norm_l2(p, g) * norm_l2(dw, g)));
            const VelocityField lw = laplacian(w, g);
            const VelocityField lz = laplacian(z, g);
            sym = std::max(sym, std::abs(inner_l2(lw, z, g) - inner_l2(lz, w, g)) /
                                    (norm_l2(lw, g) * norm_l2(z, g) + norm_l2(lz, g) * norm_l2(w, g)));
            const double s2 = h1semi_squared(w, g);
            semi = std::max(semi, std::abs(-inner_l2(lw, w, g) - s2) / s2);
        }
        report(8, "operator algebra (100 random fields)", adj <= 1e-13 && sym <= 1e-13 && semi <= 1e-12,
               fmt::format("adjointness {:.2e} (1e-13), symmetry {:.2e} (1e-13), seminorm {:.2e} (1e-12)", adj, sym,
                           semi));
    }

    // 9. Superposition against the coupled solve on a full coarse run.
    {
        RunConfig cfg = manufactured_config(16, 1.0, 0.125);
        cfg.solver.tol = kTol;
        cfg.check_superposition = true;
        const SimulationResult sim = run_simulation(cfg);
        double sup = 0.0;
        double mom = 0.0;
        for (const auto& d : sim.diagnostics) {
            sup = std::max(sup, d.superposition_error);
            mom = std::max(mom, d.relative_momentum_residual());
        }
        const bool ok = sim.completed && sim.diagnostics.size() == 8 && sup <= kIdentityLimit && mom <= kIdentityLimit;
        report(9, "superposition and coupled momentum residual (theta=1, tau=1/8, h=1/16)", ok,
               fmt::format("max superposition gap {:.3e}, max momentum residual {:.3e} (limit {:.1e})", sup, mom,
                           kIdentityLimit));
    }

    fmt::print("{} of 9 criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
