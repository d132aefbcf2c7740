#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fvporous {

/// Uniform partition of (0,1) into n control volumes.
///
/// Cells are indexed 0..n-1 here; cell i spans [i*dx, (i+1)*dx), and the last
/// cell is closed on the right. The scheme's three-branch balance needs at
/// least one interior cell, hence n >= 3.
class Grid {
public:
    explicit Grid(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    double dx() const noexcept { return dx_; }

    /// Node x_i = i*dx, i = 0..n. The last node is exactly 1.
    double node(std::size_t i) const noexcept { return i == n_ ? 1.0 : static_cast<double>(i) * dx_; }
    double center(std::size_t i) const noexcept { return (static_cast<double>(i) + 0.5) * dx_; }

    friend bool operator==(const Grid& a, const Grid& b) noexcept { return a.n_ == b.n_; }

private:
    std::size_t n_;
    double dx_;
};

/// Cell means of a function over a Grid.
class CellField {
public:
    explicit CellField(const Grid& grid, double fill = 0.0);
    CellField(const Grid& grid, std::vector<double> values);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double& operator[](std::size_t i) noexcept { return values_[i]; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    /// Throws std::domain_error naming the first non-finite cell.
    void require_finite() const;

    friend bool operator==(const CellField& a, const CellField& b) noexcept {
        return a.grid_ == b.grid_ && a.values_ == b.values_;
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Which cells of a derived field carry meaning; the rest hold exactly 0.
enum class DerivedKind { tilde, hat, delta, midpoint };

struct DerivedField {
    CellField field;
    DerivedKind kind;

    /// First and one-past-last supported cell (0-based).
    std::size_t support_begin() const noexcept { return 1; }
    std::size_t support_end() const noexcept {
        return kind == DerivedKind::hat ? field.size() - 1 : field.size();
    }
};

using ScalarFunction = std::function<double(double)>;

/// Cell averages by 5-point Gauss-Legendre per cell (exact for degree <= 9).
/// Throws std::domain_error naming the cell if f produces a non-finite sample.
CellField cell_average(const ScalarFunction& f, const Grid& grid);

/// Cell averages from a closed-form antiderivative: (F(x_{i+1}) - F(x_i)) / dx.
CellField cell_average_exact(const ScalarFunction& antiderivative, const Grid& grid);

/// Backward difference (v_i - v_{i-1})/dx on cells 1..n-1; cell 0 is 0.
DerivedField delta(const CellField& v);
/// Backward midpoint (v_i + v_{i-1})/2 on cells 1..n-1; cell 0 is 0.
DerivedField midpoint(const CellField& v);
/// Piecewise-constant derivative approximation: delta extended by 0 on cell 0.
DerivedField tilde(const CellField& v);
/// Second difference on cells 1..n-2; the two boundary cells are 0.
DerivedField hat(const CellField& v);

/// Average of a fine field over the cells of a nested coarse grid.
/// Throws std::invalid_argument unless fine.n is a multiple of coarse.n.
CellField restrict_to(const CellField& fine, const Grid& coarse);

/// Replicate each coarse value over the m fine cells it contains.
CellField inject(const CellField& coarse, const Grid& fine);

}  // namespace fvporous
