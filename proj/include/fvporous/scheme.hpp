#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fvporous/grid.hpp"
#include "fvporous/problem.hpp"

namespace fvporous {

/// Interior face fluxes F_{i+1/2}, i = 0..n-2 (0-based faces between cells i
/// and i+1). The two boundary fluxes are zero and never stored.
struct FluxVector {
    Grid grid;
    std::vector<double> values;
};

/// Tridiagonal matrix, rows 0..n-1. lower[0] and upper[n-1] are unused.
struct TridiagonalMatrix {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    explicit TridiagonalMatrix(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
    std::size_t size() const noexcept { return diag.size(); }
};

/// Solves A x = rhs by forward elimination and back substitution (no pivoting).
/// Throws NumericalError on a zero pivot.
std::vector<double> solve_tridiagonal(const TridiagonalMatrix& a, std::vector<double> rhs);

/// F_{i+1/2} = (v_{i+1} - v_i)/dx + b((v_i + v_{i+1})/2) * p_i.
///
/// The face pairs the midpoint coefficient with the pressure mean of the cell
/// on its left, exactly as the analyzed scheme does.
FluxVector assemble_fluxes(const CellField& v, const CellField& p_cells, const CoefficientB& b);

/// Semi-discrete finite volume system on a fixed grid.
///
/// G_i(v) = (F_{i+1/2} - F_{i-1/2}) / dx with zero boundary fluxes; the ODE is
/// h'(v_i) dv_i/dt = G_i(v). Pressure cell means are cached for separable
/// pressure families.
class SemiDiscreteSystem {
public:
    SemiDiscreteSystem(ProblemPtr problem, const Grid& grid);

    const Grid& grid() const noexcept { return grid_; }
    const ProblemSpec& problem() const noexcept { return *problem_; }
    const ProblemPtr& problem_ptr() const noexcept { return problem_; }

    CellField pressure(double t) const;

    /// Conservative balance G(v) for given pressure means.
    void balance(const CellField& v, const CellField& p_cells, std::span<double> out) const;
    CellField balance(double t, const CellField& v) const;

    /// dv/dt = G(v) / h'(v). Throws NumericalError if h'(v_i) < C_h1/2.
    CellField rhs(double t, const CellField& v) const;
    void rhs(const CellField& v, const CellField& p_cells, std::span<double> out) const;

    /// dG/dv for given pressure means.
    TridiagonalMatrix jacobian(const CellField& v, const CellField& p_cells) const;
    TridiagonalMatrix jacobian(double t, const CellField& v) const;

    CellField initial_state() const;
    double mass(const CellField& v) const;

private:
    ProblemPtr problem_;
    Grid grid_;
    std::optional<CellField> pressure_shape_;
};

CellField rhs(double t, const CellField& v, const ProblemPtr& spec);
CellField initial_state(const ProblemPtr& spec, const Grid& grid);
/// dx * sum_i h(v_i).
double mass(const CellField& v, const ProblemSpec& spec);
TridiagonalMatrix jacobian_G(double t, const CellField& v, const ProblemPtr& spec);

}  // namespace fvporous
