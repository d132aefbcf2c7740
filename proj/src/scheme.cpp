#include "fvporous/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fvporous/errors.hpp"

namespace fvporous {

namespace {

void require_grid(const CellField& a, const Grid& g, const char* what) {
    if (!(a.grid() == g)) {
        throw std::invalid_argument(std::string(what) + ": field on a grid of " +
                                    std::to_string(a.size()) + " cells, expected " +
                                    std::to_string(g.size()));
    }
}

}  // namespace

std::vector<double> solve_tridiagonal(const TridiagonalMatrix& a, std::vector<double> rhs) {
    const std::size_t n = a.size();
    if (rhs.size() != n) throw std::invalid_argument("tridiagonal solve: size mismatch");
    std::vector<double> c(n, 0.0);
    double pivot = a.diag[0];
    if (pivot == 0.0) throw NumericalError("tridiagonal solve: zero pivot in row 1");
    c[0] = n > 1 ? a.upper[0] / pivot : 0.0;
    rhs[0] /= pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = a.diag[i] - a.lower[i] * c[i - 1];
        if (pivot == 0.0 || !std::isfinite(pivot)) {
            throw NumericalError("tridiagonal solve: zero pivot in row " + std::to_string(i + 1));
        }
        c[i] = i + 1 < n ? a.upper[i] / pivot : 0.0;
        rhs[i] = (rhs[i] - a.lower[i] * rhs[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
    return rhs;
}

FluxVector assemble_fluxes(const CellField& v, const CellField& p_cells, const CoefficientB& b) {
    require_grid(p_cells, v.grid(), "assemble_fluxes");
    const Grid& g = v.grid();
    FluxVector f{g, std::vector<double>(g.size() - 1)};
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        f.values[i] = (v[i + 1] - v[i]) / g.dx() + b.value((v[i] + v[i + 1]) / 2.0) * p_cells[i];
    }
    return f;
}

SemiDiscreteSystem::SemiDiscreteSystem(ProblemPtr problem, const Grid& grid)
    : problem_(std::move(problem)), grid_(grid) {
    if (!problem_) throw std::invalid_argument("SemiDiscreteSystem needs a problem");
    if (problem_->p.is_separable()) pressure_shape_ = problem_->p.shape_averages(grid_);
}

CellField SemiDiscreteSystem::pressure(double t) const {
    if (!pressure_shape_) return p_cell_averages(*problem_, grid_, t);
    const double slack = 1e-12 * std::max(1.0, problem_->T);
    if (!(t >= -slack && t <= problem_->T + slack)) {
        // Same range check as the uncached path.
        return p_cell_averages(*problem_, grid_, t);
    }
    CellField out = *pressure_shape_;
    const double a = problem_->p.amplitude(t);
    for (double& x : out.values()) x *= a;
    return out;
}

void SemiDiscreteSystem::balance(const CellField& v, const CellField& p_cells, std::span<double> out) const {
    const std::size_t n = grid_.size();
    const double dx = grid_.dx();
    const CoefficientB& b = problem_->b;
    double left = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double right =
            i + 1 < n ? (v[i + 1] - v[i]) / dx + b.value((v[i] + v[i + 1]) / 2.0) * p_cells[i] : 0.0;
        out[i] = (right - left) / dx;
        left = right;
    }
}

CellField SemiDiscreteSystem::balance(double t, const CellField& v) const {
    require_grid(v, grid_, "balance");
    CellField out(grid_);
    balance(v, pressure(t), out.values());
    return out;
}

void SemiDiscreteSystem::rhs(const CellField& v, const CellField& p_cells, std::span<double> out) const {
    balance(v, p_cells, out);
    const CoefficientH& h = problem_->h;
    const double floor = h.lower() / 2.0;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        const double dh = h.d1(v[i]);
        if (!(dh >= floor)) {
            throw NumericalError("h'(v) = " + std::to_string(dh) + " below C_h1/2 in cell " +
                                 std::to_string(i + 1) + " (v = " + std::to_string(v[i]) +
                                 "): corrupted state");
        }
        out[i] /= dh;
    }
}

CellField SemiDiscreteSystem::rhs(double t, const CellField& v) const {
    require_grid(v, grid_, "rhs");
    v.require_finite();
    CellField out(grid_);
    rhs(v, pressure(t), out.values());
    return out;
}

TridiagonalMatrix SemiDiscreteSystem::jacobian(const CellField& v, const CellField& p_cells) const {
    const std::size_t n = grid_.size();
    const double dx = grid_.dx();
    const CoefficientB& b = problem_->b;
    TridiagonalMatrix j(n);
    for (std::size_t f = 0; f + 1 < n; ++f) {
        // Face between cells f and f+1.
        const double convective = 0.5 * b.d1((v[f] + v[f + 1]) / 2.0) * p_cells[f];
        const double d_left = -1.0 / dx + convective;
        const double d_right = 1.0 / dx + convective;
        // G_f gains +F/dx, G_{f+1} gains -F/dx.
        j.diag[f] += d_left / dx;
        j.upper[f] += d_right / dx;
        j.lower[f + 1] -= d_left / dx;
        j.diag[f + 1] -= d_right / dx;
    }
    return j;
}

TridiagonalMatrix SemiDiscreteSystem::jacobian(double t, const CellField& v) const {
    require_grid(v, grid_, "jacobian");
    return jacobian(v, pressure(t));
}

CellField SemiDiscreteSystem::initial_state() const { return problem_->v0.cell_averages(grid_); }

double SemiDiscreteSystem::mass(const CellField& v) const { return fvporous::mass(v, *problem_); }

CellField rhs(double t, const CellField& v, const ProblemPtr& spec) {
    return SemiDiscreteSystem(spec, v.grid()).rhs(t, v);
}

CellField initial_state(const ProblemPtr& spec, const Grid& grid) { return spec->v0.cell_averages(grid); }

double mass(const CellField& v, const ProblemSpec& spec) {
    double acc = 0.0;
    for (double x : v.values()) acc += spec.h.value(x);
    return v.grid().dx() * acc;
}

TridiagonalMatrix jacobian_G(double t, const CellField& v, const ProblemPtr& spec) {
    return SemiDiscreteSystem(spec, v.grid()).jacobian(t, v);
}

}  // namespace fvporous
