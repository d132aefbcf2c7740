#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fvporous/problem.hpp"

using namespace fvporous;

namespace {

ProblemSpec default_spec() {
    return ProblemSpec{CoefficientH::linear_plus_sin(2.0, 1.0), CoefficientB::offset_sin(2.0, 1.0),
                       PressureField::separable(0.5, 1.0, 3.0), InitialData::cosine({0.0, 1.0}), 0.25};
}

}  // namespace

TEST_CASE("declared constants of the registry families") {
    const CoefficientH h = CoefficientH::linear_plus_sin(2.0, 1.0);
    CHECK(h.lower() == 1.0);
    CHECK(h.upper() == 3.0);
    const CoefficientB b = CoefficientB::offset_sin(2.0, 1.0);
    CHECK(b.lower() == 1.0);
    CHECK(b.upper() == 3.0);
    CHECK(PressureField::zero().sup_bound() == 0.0);
    CHECK(PressureField::separable(-0.5, 1.0, 3.0).sup_bound() == 0.5);

    CHECK_THROWS_AS(CoefficientH::linear_plus_sin(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(CoefficientH::linear(0.0), std::invalid_argument);
    CHECK_THROWS_AS(CoefficientB::offset_sin(1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(CoefficientB::constant(-1.0), std::invalid_argument);
}

TEST_CASE("verify_assumptions") {
    SUBCASE("default problem passes on [-10,10]") {
        ProblemSpec spec = default_spec();
        spec.verify_range = {-10.0, 10.0};
        const VerificationReport r = verify_assumptions(spec, 10000);
        CHECK(r.passed());
        for (const BoundCheck& c : r.checks) {
            if (c.name.find(">=") != std::string::npos) {
                CHECK(c.observed >= c.declared - 1e-12);
            } else {
                CHECK(c.observed <= c.declared + 1e-12);
            }
        }
    }
    SUBCASE("constant b") {
        ProblemSpec spec = default_spec();
        spec.b = CoefficientB::constant(1.0);
        CHECK(spec.b.lower() == 1.0);
        CHECK(spec.b.upper() == 1.0);
        CHECK(verify_assumptions(spec, 1000).passed());
    }
    SUBCASE("wrong declared bound is reported with a witness") {
        ProblemSpec spec = default_spec();
        spec.h = CoefficientH::custom([](double v) { return 2.0 * v + std::sin(v); },
                                      [](double v) { return 2.0 + std::cos(v); },
                                      [](double v) { return -std::sin(v); }, 1.5, 3.0);
        const VerificationReport r = verify_assumptions(spec, 1000);
        CHECK_FALSE(r.passed());
        CHECK(r.failures().find("C_h1") != std::string::npos);
        CHECK_THROWS_AS(make_problem(spec), std::invalid_argument);
    }
    SUBCASE("too few samples") { CHECK_THROWS_AS(verify_assumptions(default_spec(), 99), std::invalid_argument); }
    SUBCASE("non-positive horizon") {
        ProblemSpec spec = default_spec();
        spec.T = 0.0;
        CHECK_THROWS_AS(make_problem(spec), std::invalid_argument);
    }
}

TEST_CASE("p_cell_averages") {
    const ProblemSpec spec = default_spec();
    const Grid g(4);
    const double pi = std::numbers::pi;
    SUBCASE("separable sine at t = 0") {
        ProblemSpec s = spec;
        s.p = PressureField::separable(1.0, 1.0, 3.0);
        CHECK(p_cell_averages(s, g, 0.0)[0] == doctest::Approx(4.0 * (1.0 - std::cos(pi / 4.0)) / pi).epsilon(1e-15));
    }
    SUBCASE("zero pressure") {
        ProblemSpec s = spec;
        s.p = PressureField::zero();
        const CellField z = p_cell_averages(s, g, 0.1);
        for (double v : z.values()) CHECK(v == 0.0);
    }
    SUBCASE("constant in x") {
        ProblemSpec s = spec;
        s.p = PressureField::custom([](double t, double) { return 1.0 + t; }, [](double, double) { return 1.0; },
                                    [](double, double) { return 0.0; }, 2.0);
        const CellField c = p_cell_averages(s, g, 0.2);
        for (double v : c.values()) CHECK(v == doctest::Approx(1.2).epsilon(1e-15));
    }
    SUBCASE("agrees with quadrature") {
        const Grid g33(33);
        for (double t : {0.0, 0.1, 0.25}) {
            const CellField exact = p_cell_averages(spec, g33, t);
            const CellField quad =
                cell_average([&](double x) { return 0.5 * std::sin(pi * x) * std::cos(3.0 * t); }, g33);
            for (std::size_t i = 0; i < 33; ++i) CHECK(std::abs(exact[i] - quad[i]) <= 1e-13);
        }
    }
    SUBCASE("time outside the horizon") {
        CHECK_THROWS_AS(p_cell_averages(spec, g, -0.1), std::out_of_range);
        CHECK_THROWS_AS(p_cell_averages(spec, g, 0.3), std::out_of_range);
    }
}

TEST_CASE("initial data projections") {
    const double pi = std::numbers::pi;
    CHECK(InitialData::cosine({0.0, 1.0}).cell_averages(Grid(3))[0] ==
          doctest::Approx(3.0 * std::sin(pi / 3.0) / pi).epsilon(1e-15));
    CHECK(3.0 * std::sin(pi / 3.0) / pi == doctest::Approx(0.8269933).epsilon(1e-7));
    const CellField c07 = InitialData::constant(0.7).cell_averages(Grid(5));
    for (double v : c07.values()) CHECK(v == 0.7);
    const InitialData lin = InitialData::custom([](double x) { return x; }, [](double) { return 1.0; });
    const CellField c = lin.cell_averages(Grid(4));
    CHECK(c[0] == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(c[3] == doctest::Approx(0.875).epsilon(1e-15));
}
