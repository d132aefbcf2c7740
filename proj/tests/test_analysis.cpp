#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "fvporous/analysis.hpp"

using namespace fvporous;

namespace {

ProblemPtr problem(PressureField p, InitialData v0, double T) {
    return make_problem(ProblemSpec{CoefficientH::linear_plus_sin(2.0, 1.0), CoefficientB::offset_sin(2.0, 1.0),
                                    std::move(p), std::move(v0), T});
}

ProblemPtr default_problem() {
    return problem(PressureField::separable(0.5, 1.0, 3.0), InitialData::cosine({0.0, 1.0}), 0.25);
}

StepControl implicit_control(double dt) {
    StepControl c;
    c.method = Method::implicit_euler;
    c.dt = dt;
    return c;
}

// Boole's rule on [0,1]: exact for polynomials of degree <= 5.
template <class F>
double boole(F&& f) {
    return (7.0 * f(0.0) + 32.0 * f(0.25) + 12.0 * f(0.5) + 32.0 * f(0.75) + 7.0 * f(1.0)) / 90.0;
}

// Gagliardo-Nirenberg discrete ratio computed independently with Boole's rule.
double gn_discrete_oracle(const std::vector<double>& w, const std::vector<double>& s) {
    const std::size_t n = s.size();
    const double dx = 1.0 / static_cast<double>(n);
    double lhs = 0.0, a2 = 0.0, t1 = 0.0, t2 = 0.0, grad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double wp = (w[i + 1] - w[i]) / dx;
        grad += dx * wp * wp;
        if (i == 0) continue;
        auto diff = [&](double xi) { return s[i] - (w[i] + (w[i + 1] - w[i]) * xi); };
        lhs += dx * boole([&](double xi) { return std::pow(diff(xi), 4); });
        a2 += dx * boole([&](double xi) { return std::pow(diff(xi), 2); });
        const double ds = (s[i] - s[i - 1]) / dx;
        const double wpl = (w[i] - w[i - 1]) / dx;
        t1 += dx * (ds - wp) * (ds - wp);
        t2 += dx * (wp - wpl) * (wp - wpl);
    }
    const double rhs = 1152.0 * a2 * a2 + 1152.0 * (t1 + t2 + dx * grad) * a2;
    return rhs == 0.0 ? 0.0 : lhs / rhs;
}

double gn_continuous_oracle(const std::vector<double>& u) {
    const std::size_t n = u.size() - 1;
    const double dx = 1.0 / static_cast<double>(n);
    double sup = 0.0, l2 = 0.0, d2 = 0.0;
    for (std::size_t i = 0; i <= n; ++i) sup = std::max(sup, u[i] * u[i]);
    for (std::size_t i = 0; i < n; ++i) {
        l2 += dx * boole([&](double xi) { return std::pow(u[i] + (u[i + 1] - u[i]) * xi, 2); });
        const double slope = (u[i + 1] - u[i]) / dx;
        d2 += dx * slope * slope;
    }
    const double rhs = l2 + 2.0 * std::sqrt(l2) * std::sqrt(d2);
    return rhs == 0.0 ? 0.0 : sup / rhs;
}

}  // namespace

TEST_CASE("norms") {
    CHECK(norm_H(CellField(Grid(3), {1, 2, 2})) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(norm_H(CellField(Grid(5), 0.0)) == 0.0);
    CHECK(norm_H(CellField(Grid(7), 1.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(norm_HDelta(CellField(Grid(3), {5, 0, 0})) == 0.0);
    CHECK(norm_HDelta(CellField(Grid(4), {0, 1, 1, 1})) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
    CHECK(norm_HDelta(CellField(Grid(8), 2.0)) == doctest::Approx(2.0 * std::sqrt(1.0 - 0.125)).epsilon(1e-15));

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Grid g(3 + trial);
        CellField f(g);
        for (std::size_t i = 0; i < g.size(); ++i) f[i] = u(rng);
        const double lhs = norm_H(f) * norm_H(f);
        const double rhs = norm_HDelta(f) * norm_HDelta(f) + g.dx() * f[0] * f[0];
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
    }
}

TEST_CASE("discrete Gagliardo-Nirenberg check") {
    const Grid g(4);
    SUBCASE("hand example") {
        const std::vector<double> w(5, 0.0), s(4, 1.0);
        const InequalitySample r = check_gn_discrete(w, s, g);
        CHECK(r.lhs == doctest::Approx(0.75).epsilon(1e-15));
        CHECK(r.rhs == doctest::Approx(648.0).epsilon(1e-15));
        CHECK(r.ratio == doctest::Approx(0.75 / 648.0).epsilon(1e-14));
    }
    SUBCASE("matched constants give 0/0") {
        const std::vector<double> w(5, 2.0), s(4, 2.0);
        const InequalitySample r = check_gn_discrete(w, s, g);
        CHECK(r.lhs == 0.0);
        CHECK(r.rhs == 0.0);
        CHECK(r.ratio == 0.0);
    }
    SUBCASE("length mismatch") {
        const std::vector<double> w(4, 0.0), s(4, 1.0);
        CHECK_THROWS_AS(check_gn_discrete(w, s, g), std::invalid_argument);
    }
    SUBCASE("agrees with an independent quadrature") {
        std::mt19937_64 rng(44);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        for (std::size_t n : {4u, 9u, 32u}) {
            const Grid gn(n);
            for (int trial = 0; trial < 40; ++trial) {
                std::vector<double> w(n + 1), s(n);
                for (double& x : w) x = u(rng);
                for (double& x : s) x = u(rng);
                CHECK(check_gn_discrete(w, s, gn).ratio == doctest::Approx(gn_discrete_oracle(w, s)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("continuous Gagliardo-Nirenberg check") {
    const Grid g(6);
    for (double c : {1.0, -3.5, 1e-3, 17.25}) {
        const std::vector<double> u(7, c);
        CHECK(check_gn_continuous(u, g).ratio == 1.0);
    }
    CHECK(check_gn_continuous(std::vector<double>(7, 0.0), g).ratio == 0.0);
    std::mt19937_64 rng(45);
    std::uniform_real_distribution<double> d(-5.0, 5.0);
    for (std::size_t n : {4u, 13u, 64u}) {
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<double> u(n + 1);
            for (double& x : u) x = d(rng);
            const double r = check_gn_continuous(u, Grid(n)).ratio;
            CHECK(r == doctest::Approx(gn_continuous_oracle(u)).epsilon(1e-12));
            CHECK(r <= 1.0);
        }
    }
}

TEST_CASE("inequality sweeps are reproducible") {
    const auto a = inequality_sweep(InequalityKind::gn_discrete, 8, 600, 123, 5.0, 1);
    const auto b = inequality_sweep(InequalityKind::gn_discrete, 8, 600, 123, 5.0, 3);
    REQUIRE(a.size() == 600);
    for (std::size_t j = 0; j < a.size(); ++j) {
        CHECK(a[j].ratio == b[j].ratio);
        CHECK(a[j].seed == (123u ^ j));
    }
    const auto c = inequality_sweep(InequalityKind::gn_continuous, 8, 600, 124, 5.0, 2);
    CHECK(c[5].ratio != a[5].ratio);
    CHECK(inequality_sweep(InequalityKind::gn_continuous, 8, 0, 1).empty());
}

TEST_CASE("order fitting") {
    SUBCASE("halving S") {
        const std::vector<ErrorRow> rows = {{16, 1.0 / 16, 0.1, 0.0, 0.1},
                                            {32, 1.0 / 32, 0.05, 0.0, 0.05},
                                            {64, 1.0 / 64, 0.025, 0.0, 0.025}};
        const OrderFit fit = fit_order(rows);
        CHECK_FALSE(fit.orders[0].has_value());
        CHECK(*fit.orders[1] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(*fit.orders[2] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(*fit.slope == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("synthetic power laws") {
        for (double order : {0.5, 1.0, 1.7, 2.0}) {
            std::vector<ErrorRow> rows;
            for (std::size_t n : {16u, 32u, 64u, 128u}) {
                const double dx = 1.0 / static_cast<double>(n);
                const double S = 3.0 * std::pow(dx, order);
                rows.push_back({n, dx, S, 0.0, S});
            }
            CHECK(std::abs(*fit_order(rows).slope - order) <= 1e-12);
        }
    }
    SUBCASE("vanishing S gives no slope") {
        const std::vector<ErrorRow> rows = {{16, 1.0 / 16, 0, 0, 0}, {32, 1.0 / 32, 0, 0, 0}};
        const OrderFit fit = fit_order(rows);
        CHECK_FALSE(fit.slope.has_value());
        CHECK_FALSE(fit.orders[1].has_value());
    }
}

TEST_CASE("error pair") {
    const ProblemPtr spec = default_problem();
    const std::vector<double> cps = uniform_checkpoints(spec->T, 10);
    const Trajectory fine = integrate(spec, Grid(32), implicit_control(0.005), cps);

    const ErrorRow self = error_pair(fine, fine);
    CHECK(self.E_sup_sq == 0.0);
    CHECK(self.E_flux == 0.0);
    CHECK(self.S == 0.0);

    Trajectory projected{Grid(8), spec, fine.times, {}, {}};
    for (const CellField& s : fine.states) projected.states.push_back(restrict_to(s, Grid(8)));
    const ErrorRow row = error_pair(projected, fine);
    CHECK(row.E_sup_sq == 0.0);
    CHECK(row.E_flux > 0.0);
    CHECK(row.S == row.E_flux);

    const Trajectory odd = integrate(spec, Grid(12), implicit_control(0.005), cps);
    CHECK_THROWS_AS(error_pair(odd, fine), std::invalid_argument);
    const Trajectory other_times = integrate(spec, Grid(8), implicit_control(0.005), uniform_checkpoints(spec->T, 5));
    CHECK_THROWS_AS(error_pair(other_times, fine), std::invalid_argument);
}

TEST_CASE("monitors") {
    SUBCASE("constant steady trajectory") {
        const ProblemPtr spec = problem(PressureField::zero(), InitialData::constant(-0.6), 1.0);
        const Trajectory traj = integrate(spec, Grid(8), implicit_control(0.1), uniform_checkpoints(1.0, 10));
        const MonitorReport m = monitors(traj);
        CHECK(m.M1 == doctest::Approx(0.6).epsilon(1e-15));
        CHECK(m.M2 == 0.0);
        CHECK(m.M3 == 0.0);
        CHECK(m.M4 == 0.0);
        CHECK(m.M5 == 0.0);
        CHECK(m.M6 == 0.6);
    }
    SUBCASE("sup dominates the final state") {
        const ProblemPtr spec = default_problem();
        const Trajectory traj = integrate(spec, Grid(16), implicit_control(0.005), uniform_checkpoints(spec->T, 10));
        const MonitorReport m = monitors(traj);
        CHECK(m.M1 >= norm_H(traj.states.back()));
        for (double x : m.values()) CHECK(x >= 0.0);
    }
}

TEST_CASE("weak residual") {
    const ProblemPtr steady = problem(PressureField::zero(), InitialData::constant(0.8), 0.5);
    const Trajectory traj = integrate(steady, Grid(10), implicit_control(0.05), uniform_checkpoints(0.5, 10));
    for (int m : {0, 1, 2, 5}) CHECK(weak_residual(traj, m) <= 1e-13);
    CHECK_THROWS_AS(weak_residual(traj, -1), std::invalid_argument);

    const ProblemPtr spec = default_problem();
    const Trajectory moving = integrate(spec, Grid(16), implicit_control(0.005), uniform_checkpoints(spec->T, 50));
    for (int m : {0, 1, 2}) {
        const double r = weak_residual(moving, m);
        CHECK(std::isfinite(r));
        CHECK(r >= 0.0);
    }
}
