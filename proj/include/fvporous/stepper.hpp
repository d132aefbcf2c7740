#pragma once

#include <cstddef>
#include <vector>

#include "fvporous/grid.hpp"
#include "fvporous/problem.hpp"
#include "fvporous/scheme.hpp"

namespace fvporous {

enum class Method { implicit_euler, explicit_adaptive };

const char* to_string(Method m) noexcept;

struct StepControl {
    Method method = Method::implicit_euler;
    /// Fixed step (implicit) or initial trial step (explicit).
    double dt = 1e-3;
    double atol = 1e-10;
    double rtol = 1e-8;
    double newton_tol = 1e-12;
    int newton_max_iter = 50;

    /// Throws std::invalid_argument when a step or tolerance is not positive.
    void validate() const;
};

struct ImplicitStepResult {
    CellField state;
    bool converged;
    int newton_iterations;
    /// Max-norm residual of h(u) - dt*G(u) - h(v_k) at return.
    double residual;
};

/// One backward Euler step of the conservative form h(u) - dt*G(t+dt, u) = h(v_k).
///
/// Newton from u = v_k with Jacobian diag(h'(u)) - dt*dG/du, residual-norm
/// halving line search (at most 8 halvings). Non-convergence is reported in
/// the result, never thrown; the caller decides whether to retry.
ImplicitStepResult step_implicit_conservative(const SemiDiscreteSystem& system, const CellField& v_k,
                                              double t, double dt, const StepControl& control);

struct ExplicitStepResult {
    CellField state;
    double dt_used;
    double dt_next;
    /// Weighted max-norm error estimate of the accepted step (<= 1).
    double error_norm;
    int rejected;
    /// dv/dt at the new state, reusable as the first stage of the next step.
    CellField derivative;
};

/// One accepted Dormand-Prince 5(4) step on dv/dt = G(v)/h'(v).
///
/// Rejected trials shrink the step by the usual safety-factor power law.
/// Throws NumericalError if the step underflows below 1e-14. `dt_max` caps the
/// step (e.g. to land on a checkpoint); `first_stage` may carry dv/dt at v_k.
ExplicitStepResult step_explicit_adaptive(const SemiDiscreteSystem& system, const CellField& v_k,
                                          double t, double dt_try, const StepControl& control,
                                          double dt_max = 0.0, const CellField* first_stage = nullptr);

struct TrajectoryDiagnostics {
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    std::size_t newton_iterations = 0;
    std::size_t newton_failures = 0;
    std::size_t max_newton_iterations = 0;
    /// Largest per-step |mass(u) - mass(v_k)| over implicit steps.
    double max_step_mass_change = 0.0;
    /// Accepted explicit step sizes (empty for implicit runs).
    std::vector<double> step_sizes;
};

/// States of the semi-discrete solution at checkpoint times t_0 = 0 < ... < t_K = T.
struct Trajectory {
    Grid grid;
    ProblemPtr problem;
    std::vector<double> times;
    std::vector<CellField> states;
    TrajectoryDiagnostics diagnostics;
};

/// K+1 uniformly spaced checkpoints on [0, T]; the last one is exactly T.
std::vector<double> uniform_checkpoints(double T, std::size_t K);

/// Integrates from the projected initial datum, landing exactly on every
/// checkpoint. Implicit Newton failures halve the step up to 20 times before
/// throwing NumericalError.
Trajectory integrate(const ProblemPtr& problem, const Grid& grid, const StepControl& control,
                     const std::vector<double>& checkpoints);

}  // namespace fvporous
