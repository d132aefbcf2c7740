#include "fvporous/grid.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fvporous {

namespace {

constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
    0.5384693101056830910363144, 0.9061798459386639927976269};
constexpr std::array<double, 5> kGaussWeights = {
    0.2369268850561890875142640, 0.4786286704993664680412915, 0.5688888888888888888888889,
    0.4786286704993664680412915, 0.2369268850561890875142640};

DerivedField backward(const CellField& v, DerivedKind kind) {
    const Grid& g = v.grid();
    CellField out(g);
    for (std::size_t i = 1; i < g.size(); ++i) {
        out[i] = kind == DerivedKind::midpoint ? (v[i] + v[i - 1]) / 2.0 : (v[i] - v[i - 1]) / g.dx();
    }
    return {std::move(out), kind};
}

}  // namespace

Grid::Grid(std::size_t n) : n_(n), dx_(n == 0 ? 0.0 : 1.0 / static_cast<double>(n)) {
    if (n < 3) {
        throw std::invalid_argument("grid needs at least 3 cells, got " + std::to_string(n));
    }
}

CellField::CellField(const Grid& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

CellField::CellField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw std::invalid_argument("cell field has " + std::to_string(values_.size()) +
                                    " values for a grid of " + std::to_string(grid_.size()) +
                                    " cells");
    }
}

void CellField::require_finite() const {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw std::domain_error("non-finite value in cell " + std::to_string(i + 1));
        }
    }
}

CellField cell_average(const ScalarFunction& f, const Grid& grid) {
    CellField out(grid);
    const double half = grid.dx() / 2.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double mid = grid.center(i);
        double acc = 0.0;
        for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
            const double sample = f(mid + half * kGaussNodes[q]);
            if (!std::isfinite(sample)) {
                throw std::domain_error("non-finite sample in cell " + std::to_string(i + 1) +
                                        " at x = " + std::to_string(mid + half * kGaussNodes[q]));
            }
            acc += kGaussWeights[q] * sample;
        }
        out[i] = acc / 2.0;
    }
    return out;
}

CellField cell_average_exact(const ScalarFunction& antiderivative, const Grid& grid) {
    CellField out(grid);
    double left = antiderivative(grid.node(0));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double right = antiderivative(grid.node(i + 1));
        out[i] = (right - left) / grid.dx();
        left = right;
    }
    out.require_finite();
    return out;
}

DerivedField delta(const CellField& v) { return backward(v, DerivedKind::delta); }

DerivedField midpoint(const CellField& v) { return backward(v, DerivedKind::midpoint); }

DerivedField tilde(const CellField& v) { return backward(v, DerivedKind::tilde); }

DerivedField hat(const CellField& v) {
    const Grid& g = v.grid();
    const double dx2 = g.dx() * g.dx();
    CellField out(g);
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        out[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / dx2;
    }
    return {std::move(out), DerivedKind::hat};
}

CellField restrict_to(const CellField& fine, const Grid& coarse) {
    const std::size_t nf = fine.size();
    const std::size_t nc = coarse.size();
    if (nf % nc != 0) {
        throw std::invalid_argument("cannot restrict " + std::to_string(nf) + " cells onto " +
                                    std::to_string(nc) + ": grids are not nested");
    }
    const std::size_t m = nf / nc;
    CellField out(coarse);
    for (std::size_t i = 0; i < nc; ++i) {
        // Extended accumulator: replicated values average back exactly.
        long double acc = 0.0L;
        for (std::size_t j = 0; j < m; ++j) acc += fine[i * m + j];
        out[i] = static_cast<double>(acc / static_cast<long double>(m));
    }
    return out;
}

CellField inject(const CellField& coarse, const Grid& fine) {
    const std::size_t nc = coarse.size();
    if (fine.size() % nc != 0) {
        throw std::invalid_argument("cannot inject " + std::to_string(nc) + " cells into " +
                                    std::to_string(fine.size()) + ": grids are not nested");
    }
    const std::size_t m = fine.size() / nc;
    CellField out(fine);
    for (std::size_t i = 0; i < fine.size(); ++i) out[i] = coarse[i / m];
    return out;
}

}  // namespace fvporous
