#include "fvporous/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <stdexcept>

#include "fvporous/errors.hpp"

namespace fvporous {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::filesystem::path output_dir(const RunConfig& config, const CommandOptions& options) {
    std::filesystem::path dir = options.out ? *options.out : config.out;
    std::filesystem::create_directories(dir);
    return dir;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
    return os;
}

nlohmann::json json_number(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

nlohmann::json describe_problem(const ProblemSpec& p) {
    return {{"h", p.h.describe()}, {"b", p.b.describe()}, {"p", p.p.describe()}, {"v0", p.v0.describe()}, {"T", p.T}};
}

nlohmann::json describe_diagnostics(const TrajectoryDiagnostics& d) {
    nlohmann::json j = {{"accepted_steps", d.accepted_steps},
                        {"rejected_steps", d.rejected_steps},
                        {"newton_iterations", d.newton_iterations},
                        {"newton_failures", d.newton_failures},
                        {"max_newton_iterations", d.max_newton_iterations},
                        {"max_step_mass_change", d.max_step_mass_change}};
    if (!d.step_sizes.empty()) {
        const auto [lo, hi] = std::minmax_element(d.step_sizes.begin(), d.step_sizes.end());
        j["min_step"] = *lo;
        j["max_step"] = *hi;
    }
    return j;
}

void write_summary(const std::filesystem::path& dir, CommandResult& result) {
    const std::filesystem::path path = dir / "summary.json";
    std::ofstream os = open_output(path);
    os << result.summary.dump(2) << '\n';
    result.files.push_back(path);
}

nlohmann::json base_summary(const char* command, const RunConfig& config) {
    nlohmann::json echo = nlohmann::json::object();
    for (const auto& [key, value] : config.echo) echo[key] = value;
    return {{"command", command}, {"config", echo}, {"problem", describe_problem(*config.problem)}};
}

Trajectory run(const RunConfig& config, std::size_t n, StepRule rule) {
    const Grid grid(n);
    return integrate(config.problem, grid, control_for(config, n, rule),
                     uniform_checkpoints(config.problem->T, config.checkpoints));
}

/// Runs one trajectory per n concurrently; results come back in the order of ns.
std::vector<Trajectory> run_all(const RunConfig& config, std::span<const std::size_t> ns, StepRule rule) {
    std::vector<std::future<Trajectory>> jobs;
    for (std::size_t n : ns) {
        jobs.push_back(std::async(std::launch::async, [&config, n, rule] { return run(config, n, rule); }));
    }
    std::vector<Trajectory> out;
    for (auto& job : jobs) out.push_back(job.get());
    return out;
}

}  // namespace

StepControl control_for(const RunConfig& config, std::size_t n, StepRule rule) {
    StepControl c = config.control;
    if (!config.dt_given) {
        const double dx = 1.0 / static_cast<double>(n);
        // The explicit controller adapts from its first trial, so start it near the stability limit.
        const bool coarse_step = rule == StepRule::dx_over_4 && c.method == Method::implicit_euler;
        c.dt = coarse_step ? dx / 4.0 : dx * dx / 4.0;
    }
    return c;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double relative_mass_drift(const Trajectory& traj) {
    const double m0 = mass(traj.states.front(), *traj.problem);
    double drift = 0.0;
    for (const CellField& v : traj.states) drift = std::max(drift, std::abs(mass(v, *traj.problem) - m0));
    return drift / (1.0 + std::abs(m0));
}

void write_solution_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,i,x_center,v\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const std::string t = format_double(traj.times[k]);
        for (std::size_t i = 0; i < traj.grid.size(); ++i) {
            os << t << ',' << i + 1 << ',' << format_double(traj.grid.center(i)) << ','
               << format_double(traj.states[k][i]) << '\n';
        }
    }
}

void write_convergence_csv(std::ostream& os, std::span<const ErrorRow> rows, const OrderFit& fit) {
    os << "n,dx,E_sup_sq,E_flux,S,order_S\n";
    for (std::size_t j = 0; j < rows.size(); ++j) {
        const ErrorRow& r = rows[j];
        os << r.n << ',' << format_double(r.dx) << ',' << format_double(r.E_sup_sq) << ','
           << format_double(r.E_flux) << ',' << format_double(r.S) << ',';
        if (j < fit.orders.size() && fit.orders[j]) os << format_double(*fit.orders[j]);
        os << '\n';
    }
}

void write_monitor_csv(std::ostream& os, std::span<const MonitorReport> rows) {
    os << "n,M1,M2,M3,M4,M5,M6\n";
    for (const MonitorReport& r : rows) {
        os << r.n;
        for (double m : r.values()) os << ',' << format_double(m);
        os << '\n';
    }
}

MonitorSpread monitor_spread(std::span<const MonitorReport> rows) {
    if (rows.size() < 2) throw std::invalid_argument("monitor spread needs at least two resolutions");
    const auto last = rows[rows.size() - 1].values();
    const auto prev = rows[rows.size() - 2].values();
    MonitorSpread s{};
    for (std::size_t j = 0; j < 6; ++j) {
        const double diff = std::abs(last[j] - prev[j]);
        s.spread[j] = diff == 0.0 ? 0.0 : diff / std::abs(last[j]);
        double peak = 0.0;
        for (const MonitorReport& r : rows) peak = std::max(peak, r.values()[j]);
        s.max_over_last[j] = peak == 0.0 ? 1.0 : peak / std::abs(last[j]);
    }
    return s;
}

CommandResult cmd_solve(const RunConfig& config, const CommandOptions& options) {
    const auto start = Clock::now();
    const std::filesystem::path dir = output_dir(config, options);
    const std::size_t n = options.ns.empty() ? config.n : options.ns.front();
    const Trajectory traj = run(config, n, StepRule::dx_over_4);

    CommandResult result;
    const std::filesystem::path csv = dir / "solution.csv";
    {
        std::ofstream os = open_output(csv);
        write_solution_csv(os, traj);
    }
    result.files.push_back(csv);

    const double drift = relative_mass_drift(traj);
    const StepControl control = control_for(config, n, StepRule::dx_over_4);
    const bool implicit = control.method == Method::implicit_euler;
    result.passed = !implicit || drift <= kMaxRelativeMassDrift;

    nlohmann::json& s = result.summary;
    s = base_summary("solve", config);
    s["n"] = n;
    s["method"] = to_string(control.method);
    s["dt"] = control.dt;
    s["checkpoints"] = config.checkpoints;
    s["diagnostics"] = describe_diagnostics(traj.diagnostics);
    s["mass_initial"] = mass(traj.states.front(), *config.problem);
    s["mass_final"] = mass(traj.states.back(), *config.problem);
    s["mass_drift_relative"] = drift;
    s["weak_residual"] = {json_number(weak_residual(traj, 0)), json_number(weak_residual(traj, 1)),
                          json_number(weak_residual(traj, 2))};
    s["passed"] = result.passed;
    s["outputs"] = {csv.filename().string(), "summary.json"};
    s["wall_time_s"] = seconds_since(start);
    write_summary(dir, result);
    return result;
}

CommandResult cmd_converge(const RunConfig& config, const CommandOptions& options) {
    const auto start = Clock::now();
    const std::vector<std::size_t> ns = options.ns.empty() ? std::vector<std::size_t>{16, 32, 64, 128} : options.ns;
    const std::size_t ref_n = options.ref_n.value_or(1024);
    for (std::size_t j = 0; j < ns.size(); ++j) {
        if (ns[j] < 3) throw std::invalid_argument("every n must be at least 3");
        if (j > 0 && ns[j] != 2 * ns[j - 1]) {
            throw std::invalid_argument("ns must double strictly: " + std::to_string(ns[j - 1]) + " then " +
                                        std::to_string(ns[j]));
        }
        if (ref_n % ns[j] != 0) {
            throw std::invalid_argument("n = " + std::to_string(ns[j]) + " does not divide ref_n = " +
                                        std::to_string(ref_n) + ": grids are not nested");
        }
    }
    if (ns.empty()) throw std::invalid_argument("converge needs at least one n");
    const std::filesystem::path dir = output_dir(config, options);

    std::vector<std::size_t> all(ns);
    const bool ref_in_sweep = std::find(ns.begin(), ns.end(), ref_n) != ns.end();
    if (!ref_in_sweep) all.push_back(ref_n);
    std::vector<Trajectory> trajs = run_all(config, all, StepRule::dx2_over_4);
    const Trajectory& reference =
        ref_in_sweep ? trajs[static_cast<std::size_t>(std::find(ns.begin(), ns.end(), ref_n) - ns.begin())]
                     : trajs.back();

    std::vector<ErrorRow> rows;
    for (std::size_t j = 0; j < ns.size(); ++j) rows.push_back(error_pair(trajs[j], reference));
    const OrderFit fit = fit_order(rows);

    CommandResult result;
    const std::filesystem::path csv = dir / "convergence.csv";
    {
        std::ofstream os = open_output(csv);
        write_convergence_csv(os, rows, fit);
    }
    result.files.push_back(csv);
    result.passed = !fit.slope || *fit.slope >= kMinConvergenceOrder;

    nlohmann::json& s = result.summary;
    s = base_summary("converge", config);
    s["ns"] = ns;
    s["ref_n"] = ref_n;
    s["method"] = to_string(config.control.method);
    s["checkpoints"] = config.checkpoints;
    s["slope"] = fit.slope ? json_number(*fit.slope) : nlohmann::json(nullptr);
    s["min_order"] = kMinConvergenceOrder;
    nlohmann::json diag = nlohmann::json::object();
    for (std::size_t j = 0; j < all.size(); ++j) {
        diag[std::to_string(all[j])] = describe_diagnostics(trajs[j].diagnostics);
        diag[std::to_string(all[j])]["mass_drift_relative"] = relative_mass_drift(trajs[j]);
    }
    s["diagnostics"] = diag;
    s["passed"] = result.passed;
    s["outputs"] = {csv.filename().string(), "summary.json"};
    s["wall_time_s"] = seconds_since(start);
    write_summary(dir, result);
    return result;
}

CommandResult cmd_inequalities(const RunConfig& config, const CommandOptions& options) {
    const auto start = Clock::now();
    const std::vector<std::size_t> ns = options.ns.empty() ? std::vector<std::size_t>{4, 8, 16, 64, 256} : options.ns;
    for (std::size_t n : ns) {
        if (n < 3) throw std::invalid_argument("every n must be at least 3");
    }
    const std::size_t samples = options.samples.value_or(10000);
    const std::uint64_t seed = options.seed.value_or(config.seed);
    const std::filesystem::path dir = output_dir(config, options);

    CommandResult result;
    result.passed = true;
    nlohmann::json per_kind = nlohmann::json::object();
    const std::filesystem::path csv = dir / "inequalities.csv";
    {
        std::ofstream os = open_output(csv);
        os << "kind,n,sample_id,ratio\n";
        for (InequalityKind kind : {InequalityKind::gn_discrete, InequalityKind::gn_continuous}) {
            double kind_max = 0.0;
            nlohmann::json by_n = nlohmann::json::object();
            for (std::size_t n : ns) {
                const std::vector<InequalitySample> sweep = inequality_sweep(kind, n, samples, seed);
                double n_max = 0.0;
                for (std::size_t j = 0; j < sweep.size(); ++j) {
                    os << to_string(kind) << ',' << n << ',' << j << ',' << format_double(sweep[j].ratio) << '\n';
                    n_max = std::max(n_max, sweep[j].ratio);
                    if (!(sweep[j].ratio <= 1.0)) result.passed = false;
                }
                by_n[std::to_string(n)] = n_max;
                kind_max = std::max(kind_max, n_max);
            }
            per_kind[to_string(kind)] = {{"max_ratio", kind_max}, {"max_ratio_by_n", by_n}};
        }
    }
    result.files.push_back(csv);

    nlohmann::json& s = result.summary;
    s = base_summary("inequalities", config);
    s["ns"] = ns;
    s["samples"] = samples;
    s["seed"] = seed;
    s["C5"] = kGagliardoNirenbergC5;
    s["kinds"] = per_kind;
    s["passed"] = result.passed;
    s["outputs"] = {csv.filename().string(), "summary.json"};
    s["wall_time_s"] = seconds_since(start);
    write_summary(dir, result);
    return result;
}

CommandResult cmd_monitors(const RunConfig& config, const CommandOptions& options) {
    const auto start = Clock::now();
    const std::vector<std::size_t> ns =
        options.ns.empty() ? std::vector<std::size_t>{32, 64, 128, 256, 512} : options.ns;
    for (std::size_t n : ns) {
        if (n < 3) throw std::invalid_argument("every n must be at least 3");
    }
    const std::filesystem::path dir = output_dir(config, options);
    const std::vector<Trajectory> trajs = run_all(config, ns, StepRule::dx_over_4);

    std::vector<MonitorReport> rows;
    for (const Trajectory& t : trajs) rows.push_back(monitors(t));

    CommandResult result;
    const std::filesystem::path csv = dir / "monitors.csv";
    {
        std::ofstream os = open_output(csv);
        write_monitor_csv(os, rows);
    }
    result.files.push_back(csv);

    nlohmann::json& s = result.summary;
    s = base_summary("monitors", config);
    s["ns"] = ns;
    s["method"] = to_string(config.control.method);
    s["checkpoints"] = config.checkpoints;
    result.passed = true;
    if (rows.size() >= 2) {
        const MonitorSpread spread = monitor_spread(rows);
        nlohmann::json sp = nlohmann::json::object();
        nlohmann::json growth = nlohmann::json::object();
        for (std::size_t j = 0; j < 6; ++j) {
            const std::string name = "M" + std::to_string(j + 1);
            sp[name] = json_number(spread.spread[j]);
            growth[name] = json_number(spread.max_over_last[j]);
            if (!(spread.spread[j] <= kMaxMonitorSpread) || !(spread.max_over_last[j] <= kMaxMonitorGrowth)) {
                result.passed = false;
            }
        }
        s["spread"] = sp;
        s["max_over_last"] = growth;
        s["spread_threshold"] = kMaxMonitorSpread;
        s["growth_threshold"] = kMaxMonitorGrowth;
    }
    s["passed"] = result.passed;
    s["outputs"] = {csv.filename().string(), "summary.json"};
    s["wall_time_s"] = seconds_since(start);
    write_summary(dir, result);
    return result;
}

}  // namespace fvporous
