#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fvporous/grid.hpp"
#include "fvporous/stepper.hpp"

namespace fvporous {

/// L2(0,1) norm of the piecewise-constant function: sqrt(dx * sum f_i^2).
double norm_H(const CellField& f);
/// L2(dx,1) norm: the first cell is excluded.
double norm_HDelta(const CellField& f);

struct ErrorRow {
    std::size_t n;
    double dx;
    /// sup over checkpoints of |restrict(v_ref) - v|_H^2.
    double E_sup_sq;
    /// Time trapezoid of |restrict(tilde v_ref) - tilde v|_{H_Delta}^2.
    double E_flux;
    double S;
};

/// Compares a coarse trajectory against a reference on a nested finer grid.
/// Throws std::invalid_argument on non-nested grids or mismatched checkpoints.
ErrorRow error_pair(const Trajectory& coarse, const Trajectory& reference);

struct OrderFit {
    /// orders[j] is the observed order between rows j-1 and j; orders[0] is empty.
    std::vector<std::optional<double>> orders;
    /// Least-squares slope of log S against log dx, when at least two rows have S > 0.
    std::optional<double> slope;
};

OrderFit fit_order(std::span<const ErrorRow> rows);

/// Least-squares slope of log(y) against log(x). Entries with y <= 0 are skipped.
std::optional<double> log_log_slope(std::span<const double> x, std::span<const double> y);

struct MonitorReport {
    std::size_t n;
    double M1;  ///< sup_k |v(t_k)|_H
    double M2;  ///< int_0^T |tilde v|_H^2 dt
    double M3;  ///< sum_k |(v_{k+1} - v_k)/dt_k|_H^2 dt_k
    double M4;  ///< sup_k |tilde v(t_k)|_H
    double M5;  ///< int_0^T |hat v|_H^2 dt
    double M6;  ///< max_{i,k} |v_i(t_k)|

    std::array<double, 6> values() const { return {M1, M2, M3, M4, M5, M6}; }
};

MonitorReport monitors(const Trajectory& traj);

struct InequalitySample {
    std::size_t n;
    std::uint64_t seed;
    double lhs;
    double rhs;
    /// lhs / rhs, with 0/0 taken as 0.
    double ratio;
    std::string witness;
};

/// Discrete Gagliardo-Nirenberg inequality for s - w, with s piecewise constant
/// (n cell values) and w the piecewise-linear interpolant of n+1 nodal values.
///
///   int_dx^1 |s-w|^4 <= C5 |s-w|^4_{HD}
///       + C5 (|dx s - w'|^2_{HD} + |w' - w'(. - dx)|^2_{HD} + dx |w'|^2_H) |s-w|^2_{HD}
///
/// with C5 = 1152. All integrals are exact for this class of (s, w).
InequalitySample check_gn_discrete(std::span<const double> w_nodes, std::span<const double> s_cells,
                                   const Grid& grid);

/// |u|^2_inf <= |u|^2_H + 2 |u|_H |u'|_H for the piecewise-linear interpolant of n+1 nodes.
InequalitySample check_gn_continuous(std::span<const double> u_nodes, const Grid& grid);

inline constexpr double kGagliardoNirenbergC5 = 1152.0;

enum class InequalityKind { gn_discrete, gn_continuous };

const char* to_string(InequalityKind kind) noexcept;

/// Randomized sweep with entries uniform in [-amplitude, amplitude]. Sample j
/// draws from its own generator seeded with seed ^ j, so results do not depend
/// on how samples are scheduled across threads.
std::vector<InequalitySample> inequality_sweep(InequalityKind kind, std::size_t n, std::size_t samples,
                                               std::uint64_t seed, double amplitude = 5.0,
                                               unsigned threads = 0);

/// |R| for the discrete weak-form residual against eta = (1 - t/T) cos(m pi x).
/// Throws std::invalid_argument for m < 0.
double weak_residual(const Trajectory& traj, int m);

}  // namespace fvporous
