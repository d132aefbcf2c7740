#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fvporous/analysis.hpp"
#include "fvporous/config.hpp"

namespace fvporous {

/// Command-line overrides shared by the experiment commands.
struct CommandOptions {
    std::vector<std::size_t> ns;
    std::optional<std::size_t> ref_n;
    std::optional<std::size_t> samples;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out;
};

struct CommandResult {
    /// The command's own acceptance predicate.
    bool passed = false;
    nlohmann::json summary;
    std::vector<std::filesystem::path> files;
};

/// Which default step applies when `time.dt` is absent from the config.
enum class StepRule {
    dx_over_4,   ///< dt = dx/4: default for solve and monitors
    dx2_over_4,  ///< dt = dx^2/4: temporal error below the spatial error being measured
};

StepControl control_for(const RunConfig& config, std::size_t n, StepRule rule);

/// 17 significant digits, '.' decimal point, shortest exponent form ("%.17g").
std::string format_double(double x);

/// max_k |mass(v_k) - mass(v_0)| / (1 + |mass(v_0)|).
double relative_mass_drift(const Trajectory& traj);

void write_solution_csv(std::ostream& os, const Trajectory& traj);
void write_convergence_csv(std::ostream& os, std::span<const ErrorRow> rows, const OrderFit& fit);
void write_monitor_csv(std::ostream& os, std::span<const MonitorReport> rows);

struct MonitorSpread {
    /// |M(n_last) - M(n_prev)| / |M(n_last)| per monitor; 0 when both vanish.
    std::array<double, 6> spread;
    /// max over the sweep divided by the value at n_last; 1 when everything vanishes.
    std::array<double, 6> max_over_last;
};

/// Needs at least two rows; compares the last two.
MonitorSpread monitor_spread(std::span<const MonitorReport> rows);

inline constexpr double kMinConvergenceOrder = 0.5;
inline constexpr double kMaxMonitorSpread = 0.10;
inline constexpr double kMaxMonitorGrowth = 2.0;
inline constexpr double kMaxRelativeMassDrift = 1e-9;

/// Trajectory CSV `t,i,x_center,v` and summary.json. Passes when the run finishes
/// and, for implicit runs, the relative mass drift stays within 1e-9.
CommandResult cmd_solve(const RunConfig& config, const CommandOptions& options);

/// Convergence table `n,dx,E_sup_sq,E_flux,S,order_S` against a nested reference.
/// Passes when the least-squares order is at least 0.5 (or cannot be formed).
CommandResult cmd_converge(const RunConfig& config, const CommandOptions& options);

/// Randomized inequality sweep `kind,n,sample_id,ratio`. Passes when every ratio <= 1.
CommandResult cmd_inequalities(const RunConfig& config, const CommandOptions& options);

/// Bound monitors `n,M1,...,M6`. Passes when the two largest n agree within 10%
/// and no monitor exceeds twice its value at the largest n.
CommandResult cmd_monitors(const RunConfig& config, const CommandOptions& options);

}  // namespace fvporous
