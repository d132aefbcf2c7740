#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fvporous/grid.hpp"

namespace fvporous {

/// Storage nonlinearity h with C_h1 <= h'(v) <= C_h2 and |h''(v)| <= C_h2.
class CoefficientH {
public:
    enum class Family { linear, linear_plus_sin, custom };

    /// h(v) = a*v, a > 0.
    static CoefficientH linear(double a);
    /// h(v) = a*v + c*sin(v), a > c >= 0.
    static CoefficientH linear_plus_sin(double a, double c);
    /// Arbitrary evaluators with caller-declared constants (checked by verify_assumptions).
    static CoefficientH custom(std::function<double(double)> h, std::function<double(double)> dh,
                               std::function<double(double)> d2h, double lower, double upper);

    double value(double v) const;
    double d1(double v) const;
    double d2(double v) const;

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    Family family() const noexcept { return family_; }
    std::string describe() const;

private:
    CoefficientH() = default;

    Family family_ = Family::linear;
    double a_ = 1.0;
    double c_ = 0.0;
    double lower_ = 1.0;
    double upper_ = 1.0;
    std::function<double(double)> h_, dh_, d2h_;
};

/// Convection coefficient b with C_b1 <= b(v) <= C_b2 and |b'|, |b''| <= C_b2.
class CoefficientB {
public:
    enum class Family { constant, offset_sin, custom };

    /// b(v) = c0 > 0.
    static CoefficientB constant(double c0);
    /// b(v) = c0 + c1*sin(v), c0 > c1 >= 0.
    static CoefficientB offset_sin(double c0, double c1);
    static CoefficientB custom(std::function<double(double)> b, std::function<double(double)> db,
                               std::function<double(double)> d2b, double lower, double upper);

    double value(double v) const;
    double d1(double v) const;
    double d2(double v) const;

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    Family family() const noexcept { return family_; }
    std::string describe() const;

private:
    CoefficientB() = default;

    Family family_ = Family::constant;
    double c0_ = 1.0;
    double c1_ = 0.0;
    double lower_ = 1.0;
    double upper_ = 1.0;
    std::function<double(double)> b_, db_, d2b_;
};

/// Given pressure p(t,x) on [0,T]x[0,1].
///
/// Registry families are separable, p = amplitude(t) * shape(x), which lets
/// the solver precompute the spatial cell averages once per grid.
class PressureField {
public:
    enum class Family { zero, separable, custom };

    static PressureField zero();
    /// p(t,x) = alpha * sin(k*pi*x) * cos(omega*t).
    static PressureField separable(double alpha, double k, double omega);
    /// Custom evaluators; cell averages fall back to Gauss-Legendre quadrature.
    static PressureField custom(std::function<double(double, double)> p,
                                std::function<double(double, double)> dt,
                                std::function<double(double, double)> dx, double sup_bound);

    double value(double t, double x) const;
    double dt(double t, double x) const;
    double dx(double t, double x) const;

    /// Declared |p|_{L^inf(Q(T))}.
    double sup_bound() const noexcept { return sup_; }
    Family family() const noexcept { return family_; }
    bool is_separable() const noexcept { return family_ != Family::custom; }

    /// Cell averages of the spatial shape (separable families only).
    CellField shape_averages(const Grid& grid) const;
    /// Time factor multiplying shape_averages (separable families only).
    double amplitude(double t) const;

    /// Cell averages of p(t, .) on the grid.
    CellField cell_averages(const Grid& grid, double t) const;
    std::string describe() const;

private:
    PressureField() = default;

    Family family_ = Family::zero;
    double alpha_ = 0.0;
    double k_ = 1.0;
    double omega_ = 0.0;
    double sup_ = 0.0;
    std::function<double(double, double)> p_, pt_, px_;
};

/// Initial datum v0 on [0,1].
class InitialData {
public:
    enum class Family { constant, cosine, custom };

    static InitialData constant(double c);
    /// v0(x) = sum_m a[m] * cos(m*pi*x), m = 0..a.size()-1.
    static InitialData cosine(std::vector<double> a);
    static InitialData custom(std::function<double(double)> v0, std::function<double(double)> dv0);

    double value(double x) const;
    double d1(double x) const;

    /// Cell averages of v0; closed form for registry families.
    CellField cell_averages(const Grid& grid) const;
    Family family() const noexcept { return family_; }
    std::string describe() const;

private:
    InitialData() = default;

    Family family_ = Family::constant;
    double c_ = 0.0;
    std::vector<double> a_;
    std::function<double(double)> v0_, dv0_;
};

/// Complete problem data. Immutable once built; share via ProblemPtr.
struct ProblemSpec {
    CoefficientH h;
    CoefficientB b;
    PressureField p;
    InitialData v0;
    double T;
    /// Range of v over which the coefficient bounds are sampled.
    std::pair<double, double> verify_range{-20.0, 20.0};
};

using ProblemPtr = std::shared_ptr<const ProblemSpec>;

/// Cell averages of p(t, .), t in [0, T].
CellField p_cell_averages(const ProblemSpec& spec, const Grid& grid, double t);

struct BoundCheck {
    std::string name;       // e.g. "h'(v) >= C_h1"
    double declared;        // the constant it is compared against
    double observed;        // extreme sampled value
    double witness;         // v (or x for pressure) where the extreme occurred
    double witness_t = 0.0; // t for pressure checks
    bool passed;
};

struct VerificationReport {
    std::vector<BoundCheck> checks;

    bool passed() const;
    /// One line per failed bound; empty when everything passed.
    std::string failures() const;
};

/// Dense sampling of the coefficient bounds over spec.verify_range and of
/// |p| over [0,T]x[0,1]. samples >= 100.
VerificationReport verify_assumptions(const ProblemSpec& spec, int samples);

/// Validates T and the declared constants, then runs verify_assumptions with
/// 1000 samples. Throws std::invalid_argument naming the violated bound.
ProblemPtr make_problem(ProblemSpec spec);

}  // namespace fvporous
