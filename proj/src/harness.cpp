#include "drlm/harness.hpp"

#include "drlm/manufactured.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace drlm {

std::vector<LadderRung> default_ladder() { return make_ladder(0.125, 5); }

std::vector<LadderRung> make_ladder(double coarsest_tau, int rungs, double h_over_tau)
{
    if (!(coarsest_tau > 0.0) || rungs < 1 || !(h_over_tau > 0.0)) {
        throw std::invalid_argument("make_ladder: need tau > 0, at least one rung, h/tau > 0");
    }
    std::vector<LadderRung> ladder;
    double tau = coarsest_tau;
    for (int k = 0; k < rungs; ++k) {
        ladder.push_back({tau, h_over_tau * tau});
        tau *= 0.5;
    }
    return ladder;
}

namespace {

int cells_for(double h)
{
    const double n = std::round(1.0 / h);
    if (n < 2.0 || std::abs(1.0 / h - n) > 1e-9 * n) {
        throw std::invalid_argument(fmt::format("mesh size {} does not divide the unit square", h));
    }
    return static_cast<int>(n);
}

bool halves(double coarse, double fine) { return std::abs(coarse - 2.0 * fine) <= 1e-12 * coarse; }

} // namespace

void validate_ladder(const std::vector<LadderRung>& ladder)
{
    if (ladder.empty()) throw std::invalid_argument("empty ladder");
    for (std::size_t k = 0; k < ladder.size(); ++k) {
        if (!(ladder[k].tau > 0.0)) throw std::invalid_argument("ladder: tau must be positive");
        cells_for(ladder[k].h);
        if (k > 0 && !halves(ladder[k - 1].tau, ladder[k].tau)) {
            throw std::invalid_argument("ladder: each tau must halve the previous one");
        }
    }
}

std::optional<double> compute_rate(double err_coarse, double err_fine)
{
    if (!(err_coarse > 0.0) || !(err_fine > 0.0) || !std::isfinite(err_coarse) || !std::isfinite(err_fine)) {
        return std::nullopt;
    }
    return std::log2(err_coarse / err_fine);
}

ConvergenceRecord run_single(double theta, const LadderRung& rung, const StudyConfig& cfg)
{
    ConvergenceRecord rec;
    rec.theta = theta;
    rec.tau = rung.tau;
    rec.h = rung.h;

    const auto start = std::chrono::steady_clock::now();
    try {
        RunConfig run = manufactured_config(cells_for(rung.h), theta, rung.tau, cfg.nu, cfg.final_time);
        run.solver = cfg.solver;
        const SimulationResult sim = run_simulation(run);

        rec.steps = static_cast<int>(sim.diagnostics.size());
        rec.min_q = std::numeric_limits<double>::infinity();
        rec.max_q = 1.0;
        for (const StepDiagnostics& d : sim.diagnostics) {
            rec.min_q = std::min(rec.min_q, d.q);
            rec.max_q = std::max(rec.max_q, d.q);
            rec.max_rel_energy_residual = std::max(rec.max_rel_energy_residual, d.relative_energy_residual());
            rec.max_rel_qdyn_residual = std::max(rec.max_rel_qdyn_residual, d.relative_qdyn_residual());
            rec.max_rel_momentum_residual =
                std::max(rec.max_rel_momentum_residual, d.relative_momentum_residual());
            rec.max_divergence_inf = std::max(rec.max_divergence_inf, d.divergence_inf);
        }
        if (!sim.completed) {
            rec.failed = true;
            rec.error = sim.error;
        } else {
            const DrlmState& s = sim.final_state;
            const ErrorNorms e = error_norms(s.velocity, s.pressure, s.q, s.time, run.grid, ExactSolution(cfg.nu));
            rec.err_u_l2 = e.norms.l2_u;
            rec.err_u_h1 = e.norms.h1_u;
            rec.err_p_l2 = e.norms.l2_p;
            rec.err_q = std::abs(e.e_q);
        }
    } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

void attach_rates(std::vector<ConvergenceRecord>& records)
{
    for (ConvergenceRecord& fine : records) {
        fine.rate_u_l2.reset();
        fine.rate_u_h1.reset();
        fine.rate_p_l2.reset();
        fine.rate_q.reset();
        if (fine.failed) continue;
        const auto coarse = std::find_if(records.begin(), records.end(), [&](const ConvergenceRecord& c) {
            return !c.failed && c.theta == fine.theta && halves(c.tau, fine.tau);
        });
        if (coarse == records.end()) continue;
        fine.rate_u_l2 = compute_rate(coarse->err_u_l2, fine.err_u_l2);
        fine.rate_u_h1 = compute_rate(coarse->err_u_h1, fine.err_u_h1);
        fine.rate_p_l2 = compute_rate(coarse->err_p_l2, fine.err_p_l2);
        fine.rate_q = compute_rate(coarse->err_q, fine.err_q);
    }
}

std::vector<ConvergenceRecord> run_study(const StudyConfig& cfg, const StudyProgress& progress)
{
    validate_ladder(cfg.ladder);
    if (cfg.thetas.empty()) throw std::invalid_argument("run_study: no theta values");

    std::vector<double> thetas = cfg.thetas;
    std::sort(thetas.begin(), thetas.end());
    thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());

    std::vector<std::pair<double, LadderRung>> jobs;
    for (double theta : thetas)
        for (const LadderRung& rung : cfg.ladder) jobs.emplace_back(theta, rung);

    std::vector<ConvergenceRecord> records(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex progress_mutex;
    auto worker = [&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++) {
            records[k] = run_single(jobs[k].first, jobs[k].second, cfg);
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(records[k]);
            }
        }
    };
    const int n_workers = std::clamp(cfg.jobs, 1, static_cast<int>(jobs.size()));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    }

    std::stable_sort(records.begin(), records.end(), [](const ConvergenceRecord& a, const ConvergenceRecord& b) {
        if (a.theta != b.theta) return a.theta < b.theta;
        return a.tau > b.tau;
    });
    attach_rates(records);
    return records;
}

namespace {

std::string sci(double x) { return fmt::format("{:.5e}", x); }

std::string sci(const std::optional<double>& x) { return x ? sci(*x) : std::string(); }

std::string error_field(const ConvergenceRecord& r, double x) { return r.failed ? std::string() : sci(x); }

std::vector<std::string> split(std::string_view line, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& s)
{
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
    return x;
}

std::optional<double> parse_optional(const std::string& s)
{
    if (s.empty()) return std::nullopt;
    return parse_double(s);
}

} // namespace

std::string to_csv(const std::vector<ConvergenceRecord>& records)
{
    std::string out(kCsvHeader);
    out += '\n';
    for (const ConvergenceRecord& r : records) {
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", sci(r.theta), sci(r.tau), sci(r.h),
                           error_field(r, r.err_u_l2), sci(r.rate_u_l2), error_field(r, r.err_u_h1),
                           sci(r.rate_u_h1), error_field(r, r.err_p_l2), sci(r.rate_p_l2),
                           error_field(r, r.err_q), sci(r.rate_q));
    }
    return out;
}

void write_csv(const std::vector<ConvergenceRecord>& records, const std::filesystem::path& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    os << to_csv(records);
    os.flush();
    if (!os) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::vector<ConvergenceRecord> parse_csv(std::string_view text)
{
    std::vector<ConvergenceRecord> records;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || trim(line) != kCsvHeader) {
        throw std::invalid_argument("CSV header mismatch");
    }
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto f = split(trim(line), ',');
        if (f.size() != 11) {
            throw std::invalid_argument(fmt::format("CSV line {}: expected 11 fields, got {}", lineno, f.size()));
        }
        ConvergenceRecord r;
        r.theta = parse_double(f[0]);
        r.tau = parse_double(f[1]);
        r.h = parse_double(f[2]);
        r.failed = f[3].empty();
        if (!r.failed) {
            r.err_u_l2 = parse_double(f[3]);
            r.err_u_h1 = parse_double(f[5]);
            r.err_p_l2 = parse_double(f[7]);
            r.err_q = parse_double(f[9]);
        }
        r.rate_u_l2 = parse_optional(f[4]);
        r.rate_u_h1 = parse_optional(f[6]);
        r.rate_p_l2 = parse_optional(f[8]);
        r.rate_q = parse_optional(f[10]);
        records.push_back(std::move(r));
    }
    return records;
}

namespace {

std::string fraction_or_value(double x)
{
    const double inv = 1.0 / x;
    if (std::abs(inv - std::round(inv)) < 1e-9 * inv && inv >= 1.0) {
        return fmt::format("1/{}", static_cast<long long>(std::round(inv)));
    }
    return fmt::format("{:g}", x);
}

std::string cell(const ConvergenceRecord& r, double err, const std::optional<double>& rate)
{
    if (r.failed) return "failed";
    std::string s = fmt::format("{:.2e}", err);
    if (rate) s += fmt::format(" [{:.2f}]", *rate);
    return s;
}

} // namespace

std::string format_table(const std::vector<ConvergenceRecord>& records)
{
    std::string out = fmt::format("{:>6} {:>6} {:>6}  {:<16} {:<16} {:<16} {:<16}\n", "theta", "tau", "h",
                                  "|e_u|_0", "|e_u|_1", "|e_p|_0", "|e_q|");
    for (const ConvergenceRecord& r : records) {
        out += fmt::format("{:>6g} {:>6} {:>6}  {:<16} {:<16} {:<16} {:<16}\n", r.theta, fraction_or_value(r.tau),
                           fraction_or_value(r.h), cell(r, r.err_u_l2, r.rate_u_l2),
                           cell(r, r.err_u_h1, r.rate_u_h1), cell(r, r.err_p_l2, r.rate_p_l2),
                           cell(r, r.err_q, r.rate_q));
    }
    return out;
}

std::string diagnostics_csv(const std::vector<StepDiagnostics>& diagnostics)
{
    std::string out = "step,time,q,energy_residual,qdyn_residual,div_inf\n";
    for (const StepDiagnostics& d : diagnostics) {
        out += fmt::format("{},{},{},{},{},{}\n", d.step, sci(d.time), fmt::format("{:.15e}", d.q),
                           sci(d.energy_residual), sci(d.qdyn_residual), sci(d.divergence_inf));
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text)
{
    std::vector<std::pair<std::string, std::string>> entries;
    int lineno = 0;
    for (const std::string& raw : split(text, '\n')) {
        ++lineno;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument(fmt::format("config line {}: expected 'key = value'", lineno));
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw std::invalid_argument(fmt::format("config line {}: empty key or value", lineno));
        }
        entries.emplace_back(std::string(key), std::string(value));
    }
    return entries;
}

} // namespace drlm
