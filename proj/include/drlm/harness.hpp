#pragma once

#include "drlm/drlm_stepper.hpp"
#include "drlm/stokes_solver.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace drlm {

/// One (theta, tau, h) run of the manufactured problem, errors at the final time.
struct ConvergenceRecord {
    double theta = 0.0;
    double tau = 0.0;
    double h = 0.0;
    double err_u_l2 = 0.0;
    double err_u_h1 = 0.0;
    double err_p_l2 = 0.0;
    double err_q = 0.0;
    /// log2 ratios against the companion run with twice the step.
    std::optional<double> rate_u_l2;
    std::optional<double> rate_u_h1;
    std::optional<double> rate_p_l2;
    std::optional<double> rate_q;

    bool failed = false;
    std::string error;

    // Per-run audit, not part of the CSV.
    int steps = 0;
    double min_q = 0.0;
    double max_q = 0.0;
    double max_rel_energy_residual = 0.0;
    double max_rel_qdyn_residual = 0.0;
    double max_rel_momentum_residual = 0.0;
    double max_divergence_inf = 0.0;
    double seconds = 0.0;
};

struct LadderRung {
    double tau = 0.0;
    double h = 0.0;
};

/// tau = 2h in {1/8, 1/16, 1/32, 1/64, 1/128}.
std::vector<LadderRung> default_ladder();
/// `rungs` successive halvings starting from coarsest_tau, h = h_over_tau * tau.
std::vector<LadderRung> make_ladder(double coarsest_tau, int rungs, double h_over_tau = 0.5);
/// Throws std::invalid_argument unless taus strictly halve rung to rung and
/// every 1/h is an integer cell count.
void validate_ladder(const std::vector<LadderRung>& ladder);

struct StudyConfig {
    std::vector<double> thetas{0.1, 1.0, 10.0, 100.0};
    std::vector<LadderRung> ladder = default_ladder();
    double nu = 0.1;
    double final_time = 1.0;
    StokesOptions solver{};
    /// Worker threads for independent runs.
    int jobs = 1;
};

/// log2(coarse / fine); empty unless both errors are positive and finite.
std::optional<double> compute_rate(double err_coarse, double err_fine);

/// Runs the manufactured problem once and fills the error and audit fields.
ConvergenceRecord run_single(double theta, const LadderRung& rung, const StudyConfig& cfg);

using StudyProgress = std::function<void(const ConvergenceRecord&)>;

/// One record per (theta, rung), sorted by theta then descending tau, with
/// rates attached. A failed run is marked and the sweep continues.
std::vector<ConvergenceRecord> run_study(const StudyConfig& cfg, const StudyProgress& progress = {});

/// Fills rate fields from neighbouring records with the same theta and
/// twice the step.
void attach_rates(std::vector<ConvergenceRecord>& records);

inline constexpr std::string_view kCsvHeader =
    "theta,tau,h,err_u_l2,rate_u_l2,err_u_h1,rate_u_h1,err_p_l2,rate_p_l2,err_q,rate_q";

std::string to_csv(const std::vector<ConvergenceRecord>& records);
/// Throws std::runtime_error with the path on I/O failure.
void write_csv(const std::vector<ConvergenceRecord>& records, const std::filesystem::path& path);
/// Inverse of to_csv. Throws std::invalid_argument on malformed input.
std::vector<ConvergenceRecord> parse_csv(std::string_view text);

/// Table in the style "6.38e-02 [1.94]" with rates to two decimals.
std::string format_table(const std::vector<ConvergenceRecord>& records);

/// Per-step diagnostics CSV: step,time,q,energy_residual,qdyn_residual,div_inf
std::string diagnostics_csv(const std::vector<StepDiagnostics>& diagnostics);

/// `key = value` lines, `#` starts a comment. Keys may repeat.
/// Throws std::invalid_argument naming the line on malformed input.
std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text);

} // namespace drlm
