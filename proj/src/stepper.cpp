#include "fvporous/stepper.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "fvporous/errors.hpp"

namespace fvporous {

namespace {

constexpr int kMaxLineSearchHalvings = 8;
constexpr int kMaxStepHalvings = 20;
constexpr double kMinExplicitStep = 1e-14;

double max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) {
        if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
        m = std::max(m, std::abs(v));
    }
    return m;
}

// Dormand-Prince 5(4) tableau.
namespace dp {
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                 b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
}  // namespace dp

}  // namespace

const char* to_string(Method m) noexcept {
    return m == Method::implicit_euler ? "implicit_euler" : "explicit_adaptive";
}

void StepControl::validate() const {
    auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!positive(dt)) throw std::invalid_argument("time step must be positive");
    if (!positive(atol) || !positive(rtol)) throw std::invalid_argument("atol and rtol must be positive");
    if (!positive(newton_tol)) throw std::invalid_argument("newton_tol must be positive");
    if (newton_max_iter < 1) throw std::invalid_argument("newton_max_iter must be at least 1");
}

ImplicitStepResult step_implicit_conservative(const SemiDiscreteSystem& system, const CellField& v_k,
                                              double t, double dt, const StepControl& control) {
    if (!(dt > 0.0)) throw std::invalid_argument("implicit step needs dt > 0");
    const Grid& grid = system.grid();
    const std::size_t n = grid.size();
    const CoefficientH& h = system.problem().h;
    const CellField p = system.pressure(t + dt);

    std::vector<double> h_old(n);
    for (std::size_t i = 0; i < n; ++i) h_old[i] = h.value(v_k[i]);

    std::vector<double> g(n);
    auto residual = [&](const CellField& u, std::vector<double>& r) {
        system.balance(u, p, g);
        for (std::size_t i = 0; i < n; ++i) r[i] = h.value(u[i]) - dt * g[i] - h_old[i];
        return max_abs(r);
    };

    CellField u = v_k;
    std::vector<double> r(n), r_trial(n);
    double norm = residual(u, r);
    int iterations = 0;
    while (norm > control.newton_tol) {
        if (iterations == control.newton_max_iter) return {std::move(u), false, iterations, norm};
        TridiagonalMatrix jac = system.jacobian(u, p);
        for (std::size_t i = 0; i < n; ++i) {
            jac.lower[i] *= -dt;
            jac.upper[i] *= -dt;
            jac.diag[i] = h.d1(u[i]) - dt * jac.diag[i];
        }
        std::vector<double> step(n);
        for (std::size_t i = 0; i < n; ++i) step[i] = -r[i];
        try {
            step = solve_tridiagonal(jac, std::move(step));
        } catch (const NumericalError&) {
            return {std::move(u), false, iterations, norm};
        }

        double lambda = 1.0;
        CellField trial = u;
        double trial_norm = norm;
        for (int ls = 0; ls <= kMaxLineSearchHalvings; ++ls) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + lambda * step[i];
            trial_norm = residual(trial, r_trial);
            if (trial_norm < norm) break;
            lambda /= 2.0;
        }
        ++iterations;
        if (!std::isfinite(trial_norm)) return {std::move(u), false, iterations, norm};
        u = std::move(trial);
        std::swap(r, r_trial);
        norm = trial_norm;
    }
    return {std::move(u), true, iterations, norm};
}

ExplicitStepResult step_explicit_adaptive(const SemiDiscreteSystem& system, const CellField& v_k,
                                          double t, double dt_try, const StepControl& control,
                                          double dt_max, const CellField* first_stage) {
    using namespace dp;
    const Grid& grid = system.grid();
    const std::size_t n = grid.size();
    if (!(dt_try > 0.0)) throw std::invalid_argument("explicit step needs dt > 0");

    std::array<CellField, 7> k{CellField(grid), CellField(grid), CellField(grid), CellField(grid),
                               CellField(grid), CellField(grid), CellField(grid)};
    if (first_stage != nullptr) {
        k[0] = *first_stage;
    } else {
        system.rhs(v_k, system.pressure(t), k[0].values());
    }

    CellField stage(grid), y_new(grid);
    auto eval = [&](double tau, CellField& out) { system.rhs(stage, system.pressure(tau), out.values()); };

    double dt = dt_max > 0.0 ? std::min(dt_try, dt_max) : dt_try;
    int rejected = 0;
    for (;;) {
        if (dt < kMinExplicitStep) {
            std::ostringstream os;
            os << "explicit step size underflow (dt = " << dt << " at t = " << t
               << "); the system is too stiff for this method, switch to implicit_euler or use fewer cells";
            throw NumericalError(os.str());
        }
        // A wildly unstable trial can push a stage out of the admissible range;
        // treat that like an infinite error estimate.
        bool stages_ok = true;
        try {
            for (std::size_t i = 0; i < n; ++i) stage[i] = v_k[i] + dt * a21 * k[0][i];
            eval(t + c2 * dt, k[1]);
            for (std::size_t i = 0; i < n; ++i) stage[i] = v_k[i] + dt * (a31 * k[0][i] + a32 * k[1][i]);
            eval(t + c3 * dt, k[2]);
            for (std::size_t i = 0; i < n; ++i)
                stage[i] = v_k[i] + dt * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
            eval(t + c4 * dt, k[3]);
            for (std::size_t i = 0; i < n; ++i)
                stage[i] = v_k[i] + dt * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
            eval(t + c5 * dt, k[4]);
            for (std::size_t i = 0; i < n; ++i)
                stage[i] = v_k[i] + dt * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] +
                                          a65 * k[4][i]);
            eval(t + dt, k[5]);
            for (std::size_t i = 0; i < n; ++i)
                y_new[i] = v_k[i] + dt * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] + b6 * k[5][i]);
            stage = y_new;
            eval(t + dt, k[6]);
        } catch (const NumericalError&) {
            stages_ok = false;
        }

        double err = stages_ok ? 0.0 : std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; stages_ok && i < n; ++i) {
            const double e = dt * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] +
                                   e6 * k[5][i] + e7 * k[6][i]);
            const double scale = control.atol + control.rtol * std::max(std::abs(v_k[i]), std::abs(y_new[i]));
            const double ratio = std::abs(e) / scale;
            err = std::isfinite(ratio) ? std::max(err, ratio) : std::numeric_limits<double>::infinity();
        }

        if (err <= 1.0) {
            const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            double dt_next = dt * grow;
            if (dt < dt_try) dt_next = std::max(dt_next, dt_try);
            return {std::move(y_new), dt, dt_next, err, rejected, std::move(k[6])};
        }
        ++rejected;
        dt *= std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0) : 0.2;
    }
}

std::vector<double> uniform_checkpoints(double T, std::size_t K) {
    if (K < 1) throw std::invalid_argument("need at least one checkpoint interval");
    if (!(T > 0.0)) throw std::invalid_argument("horizon must be positive");
    std::vector<double> times(K + 1);
    for (std::size_t k = 0; k <= K; ++k) times[k] = T * static_cast<double>(k) / static_cast<double>(K);
    times[K] = T;
    return times;
}

Trajectory integrate(const ProblemPtr& problem, const Grid& grid, const StepControl& control,
                     const std::vector<double>& checkpoints) {
    control.validate();
    if (checkpoints.size() < 2) throw std::invalid_argument("need at least two checkpoint times");
    if (checkpoints.front() != 0.0) throw std::invalid_argument("checkpoints must start at t = 0");
    if (std::abs(checkpoints.back() - problem->T) > 1e-12 * std::max(1.0, problem->T)) {
        throw std::invalid_argument("checkpoints must end at T");
    }
    for (std::size_t k = 1; k < checkpoints.size(); ++k) {
        if (!(checkpoints[k] > checkpoints[k - 1])) {
            throw std::invalid_argument("checkpoint times must be strictly increasing");
        }
    }

    const SemiDiscreteSystem system(problem, grid);
    Trajectory traj{grid, problem, {}, {}, {}};
    TrajectoryDiagnostics& diag = traj.diagnostics;
    CellField state = system.initial_state();
    traj.times.push_back(checkpoints.front());
    traj.states.push_back(state);

    double t = checkpoints.front();
    double dt_explicit = control.dt;
    std::optional<CellField> derivative;

    for (std::size_t k = 1; k < checkpoints.size(); ++k) {
        const double t_end = checkpoints[k];
        while (t < t_end) {
            const double remaining = t_end - t;
            if (control.method == Method::implicit_euler) {
                const bool lands = remaining <= control.dt * (1.0 + 1e-9);
                double dt = lands ? remaining : control.dt;
                int halvings = 0;
                for (;;) {
                    ImplicitStepResult res = step_implicit_conservative(system, state, t, dt, control);
                    diag.newton_iterations += static_cast<std::size_t>(res.newton_iterations);
                    diag.max_newton_iterations =
                        std::max(diag.max_newton_iterations, static_cast<std::size_t>(res.newton_iterations));
                    if (res.converged) {
                        diag.max_step_mass_change = std::max(
                            diag.max_step_mass_change, std::abs(system.mass(res.state) - system.mass(state)));
                        state = std::move(res.state);
                        ++diag.accepted_steps;
                        t = (lands && halvings == 0) ? t_end : t + dt;
                        break;
                    }
                    ++diag.newton_failures;
                    ++diag.rejected_steps;
                    if (++halvings > kMaxStepHalvings) {
                        std::ostringstream os;
                        os << "Newton failed to converge at t = " << t << " after " << kMaxStepHalvings
                           << " step halvings (dt = " << dt << ", residual = " << res.residual << ")";
                        throw NumericalError(os.str());
                    }
                    dt /= 2.0;
                }
            } else {
                const bool lands = remaining <= dt_explicit * (1.0 + 1e-9);
                const double trial = lands ? remaining : dt_explicit;
                ExplicitStepResult res = step_explicit_adaptive(system, state, t, trial, control, remaining,
                                                                derivative ? &*derivative : nullptr);
                diag.rejected_steps += static_cast<std::size_t>(res.rejected);
                ++diag.accepted_steps;
                diag.step_sizes.push_back(res.dt_used);
                state = std::move(res.state);
                derivative = std::move(res.derivative);
                t = res.dt_used >= remaining ? t_end : t + res.dt_used;
                dt_explicit = lands && res.dt_used >= remaining ? std::max(res.dt_next, dt_explicit) : res.dt_next;
            }
        }
        traj.times.push_back(t_end);
        traj.states.push_back(state);
    }
    return traj;
}

}  // namespace fvporous
