#include "drlm/audit.hpp"
#include "drlm/drlm_stepper.hpp"
#include "drlm/harness.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Settings {
    std::vector<double> thetas;
    std::optional<double> tau;
    std::optional<double> h;
    double nu = 0.1;
    double final_time = 1.0;
    double tol = 1e-10;
    int rungs = 5;
    int jobs = 1;
    std::string out;
};

// Values from a config file act as defaults; command-line flags override them.
void apply_config(const std::string& path, Settings& s)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    bool thetas_reset = false;
    for (const auto& [key, value] : drlm::parse_config_text(buf.str())) {
        const auto num = [&] {
            std::size_t pos = 0;
            const double x = std::stod(value, &pos);
            if (pos != value.size()) throw std::invalid_argument("bad value for " + key + ": " + value);
            return x;
        };
        if (key == "theta") {
            if (!thetas_reset) s.thetas.clear();
            thetas_reset = true;
            s.thetas.push_back(num());
        } else if (key == "tau") {
            s.tau = num();
        } else if (key == "h") {
            s.h = num();
        } else if (key == "nu") {
            s.nu = num();
        } else if (key == "T") {
            s.final_time = num();
        } else if (key == "tol") {
            s.tol = num();
        } else if (key == "rungs") {
            s.rungs = static_cast<int>(num());
        } else if (key == "jobs") {
            s.jobs = static_cast<int>(num());
        } else if (key == "out") {
            s.out = value;
        } else {
            throw std::invalid_argument("unknown config key: " + key);
        }
    }
}

int cells_for(double h)
{
    const double n = 1.0 / h;
    const long r = std::lround(n);
    if (r < 2 || std::abs(n - static_cast<double>(r)) > 1e-9 * n)
        throw std::invalid_argument(fmt::format("1/h must be an integer >= 2, got h = {}", h));
    return static_cast<int>(r);
}

drlm::StokesOptions solver_options(const Settings& s)
{
    drlm::StokesOptions o;
    o.tol = s.tol;
    return o;
}

int cmd_converge(const Settings& s)
{
    drlm::StudyConfig cfg;
    if (!s.thetas.empty()) cfg.thetas = s.thetas;
    const double tau0 = s.tau.value_or(0.125);
    const double ratio = s.h ? *s.h / tau0 : 0.5;
    cfg.ladder = drlm::make_ladder(tau0, s.rungs, ratio);
    drlm::validate_ladder(cfg.ladder);
    cfg.nu = s.nu;
    cfg.final_time = s.final_time;
    cfg.solver = solver_options(s);
    cfg.jobs = s.jobs;

    const auto records = drlm::run_study(cfg, [](const drlm::ConvergenceRecord& r) {
        if (r.failed)
            fmt::print(stderr, "theta={} tau={} h={}: FAILED: {}\n", r.theta, r.tau, r.h, r.error);
        else
            fmt::print(stderr, "theta={} tau={} h={}: done in {:.1f}s\n", r.theta, r.tau, r.h, r.seconds);
    });
    const std::string path = s.out.empty() ? "convergence.csv" : s.out;
    drlm::write_csv(records, path);
    std::cout << drlm::format_table(records);
    for (const auto& r : records)
        if (r.failed) return 1;
    return 0;
}

int cmd_run(const Settings& s)
{
    const double theta = s.thetas.empty() ? 1.0 : s.thetas.front();
    const double tau = s.tau.value_or(0.125);
    const int n = cells_for(s.h.value_or(0.0625));
    drlm::RunConfig cfg = drlm::manufactured_config(n, theta, tau, s.nu, s.final_time);
    cfg.solver = solver_options(s);
    const drlm::SimulationResult sim = drlm::run_simulation(cfg);
    const std::string csv = drlm::diagnostics_csv(sim.diagnostics);
    if (s.out.empty() || s.out == "-") {
        std::cout << csv;
    } else {
        std::ofstream f(s.out);
        if (!f) throw std::runtime_error("cannot write " + s.out);
        f << csv;
    }
    if (!sim.completed) {
        fmt::print(stderr, "run failed: {}\n", sim.error);
        return 1;
    }
    return 0;
}

int cmd_check(const Settings& s)
{
    drlm::AuditOptions opt;
    opt.solver = solver_options(s);
    int failures = 0;
    for (const auto& c : drlm::run_invariant_audit(opt)) {
        fmt::print("{} {}: {}\n", c.passed ? "PASS" : "FAIL", c.name, c.detail);
        failures += c.passed ? 0 : 1;
    }
    fmt::print("{} check(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}

int cmd_oracle(const Settings& s)
{
    const double tau = s.tau.value_or(0.125);
    const int n = s.h ? cells_for(*s.h) : 8;
    const auto r = drlm::compare_with_dense_oracle(n, 1.0 / tau, s.nu, 20, solver_options(s), 7);
    fmt::print("samples {}  max |du| {:.3e}  max |dp| {:.3e}  max iterations {}\n", r.samples, r.max_velocity_diff,
               r.max_pressure_diff, r.max_iterations);
    return std::max(r.max_velocity_diff, r.max_pressure_diff) <= 1e-8 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"DRLM Navier-Stokes solver and convergence harness"};
    app.require_subcommand(1);

    std::vector<double> thetas;
    double tau = 0.0;
    double h = 0.0;
    double nu = 0.1;
    double final_time = 1.0;
    double tol = 1e-10;
    int rungs = 5;
    int jobs = 1;
    std::string out;
    std::string config;

    // --h is the mesh size, so help is long-form only.
    app.set_help_flag("--help", "print this help and exit");
    auto add_common = [&](CLI::App* sub) {
        sub->set_help_flag("--help", "print this help and exit");
        sub->add_option("--theta", thetas, "regularization parameter (repeatable)");
        sub->add_option("--tau", tau, "time step (coarsest step for converge)")->check(CLI::PositiveNumber);
        sub->add_option("--h", h, "mesh size (coarsest for converge)")->check(CLI::PositiveNumber);
        sub->add_option("--nu", nu, "viscosity")->check(CLI::PositiveNumber);
        sub->add_option("--T", final_time, "final time")->check(CLI::PositiveNumber);
        sub->add_option("--tol", tol, "Stokes solver relative tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--out", out, "output path");
        sub->add_option("--config", config, "key = value config file")->check(CLI::ExistingFile);
    };
    auto* converge = app.add_subcommand("converge", "convergence study over theta and a tau/h ladder");
    add_common(converge);
    converge->add_option("--rungs", rungs, "number of ladder rungs")->check(CLI::Range(1, 10));
    converge->add_option("--jobs", jobs, "parallel runs")->check(CLI::Range(1, 256));
    auto* run = app.add_subcommand("run", "single run, per-step diagnostics CSV");
    add_common(run);
    auto* check = app.add_subcommand("check", "invariant audit");
    add_common(check);
    auto* oracle = app.add_subcommand("oracle", "iterative vs dense Stokes comparison");
    add_common(oracle);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        Settings s;
        if (!config.empty()) apply_config(config, s);
        auto given = [&](const char* name) { return sub->count(name) > 0; };
        if (given("--theta")) s.thetas = thetas;
        if (given("--tau")) s.tau = tau;
        if (given("--h")) s.h = h;
        if (given("--nu")) s.nu = nu;
        if (given("--T")) s.final_time = final_time;
        if (given("--tol")) s.tol = tol;
        if (given("--out")) s.out = out;
        if (sub == converge) {
            if (given("--rungs")) s.rungs = rungs;
            if (given("--jobs")) s.jobs = jobs;
        }

        if (sub == converge) return cmd_converge(s);
        if (sub == run) return cmd_run(s);
        if (sub == check) return cmd_check(s);
        return cmd_oracle(s);
    } catch (const std::invalid_argument& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
}
