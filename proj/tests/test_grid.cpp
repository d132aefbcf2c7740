#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "fvporous/grid.hpp"

using namespace fvporous;

namespace {

CellField field(std::vector<double> v) {
    const Grid g(v.size());
    return CellField(g, std::move(v));
}

}  // namespace

TEST_CASE("grid geometry") {
    CHECK_THROWS_AS(Grid(2), std::invalid_argument);
    const Grid g(7);
    CHECK(g.dx() == doctest::Approx(1.0 / 7.0));
    CHECK(g.node(7) == 1.0);
    CHECK(std::abs(static_cast<double>(g.size()) * g.dx() - 1.0) <= std::numeric_limits<double>::epsilon());
    CHECK(g.center(0) == doctest::Approx(0.5 / 7.0));
}

TEST_CASE("cell field rejects non-finite entries") {
    CellField f(Grid(4), {1.0, 2.0, std::nan(""), 4.0});
    CHECK_THROWS_WITH_AS(f.require_finite(), doctest::Contains("cell 3"), std::domain_error);
    CHECK_THROWS_AS(CellField(Grid(4), std::vector<double>{1, 2, 3}), std::invalid_argument);
}

TEST_CASE("cell_average") {
    const Grid g(4);
    SUBCASE("constant") {
        const CellField c = cell_average([](double) { return 2.5; }, g);

        for (double v : c.values()) CHECK(v == doctest::Approx(2.5).epsilon(1e-15));
    }
    SUBCASE("linear is exact") {
        const CellField c = cell_average([](double x) { return x; }, g);
        const double expect[] = {0.125, 0.375, 0.625, 0.875};
        for (int i = 0; i < 4; ++i) CHECK(c[i] == doctest::Approx(expect[i]).epsilon(1e-15));
    }
    SUBCASE("sine against its antiderivative") {
        const double pi = std::numbers::pi;
        const double expect = 4.0 * (1.0 - std::cos(pi / 4.0)) / pi;
        CHECK(expect == doctest::Approx(0.3729232).epsilon(1e-7));
        const CellField q = cell_average([pi](double x) { return std::sin(pi * x); }, g);
        const CellField e = cell_average_exact([pi](double x) { return -std::cos(pi * x) / pi; }, g);
        CHECK(q[0] == doctest::Approx(expect).epsilon(1e-12));
        CHECK(e[0] == doctest::Approx(expect).epsilon(1e-14));
    }
    SUBCASE("non-finite sample names the cell") {
        CHECK_THROWS_WITH_AS(cell_average([](double x) { return x > 0.5 ? std::log(-1.0) : 0.0; }, g),
                             doctest::Contains("cell 3"), std::domain_error);
    }
    SUBCASE("linearity") {
        const Grid g9(9);
        auto f = [](double x) { return std::exp(x); };
        auto h = [](double x) { return x * x * x; };
        const CellField a = cell_average(f, g9);
        const CellField b = cell_average(h, g9);
        const CellField ab = cell_average([&](double x) { return 2.0 * f(x) - 3.0 * h(x); }, g9);
        for (std::size_t i = 0; i < 9; ++i) CHECK(ab[i] == doctest::Approx(2.0 * a[i] - 3.0 * b[i]).epsilon(1e-14));
    }
}

TEST_CASE("difference operators on [1,3,7,13]") {
    const CellField v = field({1, 3, 7, 13});
    const DerivedField d = delta(v);
    const DerivedField m = midpoint(v);
    const DerivedField t = tilde(v);
    const DerivedField h = hat(v);
    const double d_expect[] = {0, 8, 16, 24};
    const double m_expect[] = {0, 2, 5, 10};
    const double h_expect[] = {0, 32, 32, 0};
    for (std::size_t i = 1; i < 4; ++i) {
        CHECK(d.field[i] == doctest::Approx(d_expect[i]));
        CHECK(m.field[i] == doctest::Approx(m_expect[i]));
    }
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(t.field[i] == doctest::Approx(d_expect[i]));
        CHECK(h.field[i] == doctest::Approx(h_expect[i]));
    }
    CHECK(t.field[0] == 0.0);
    CHECK(h.field[0] == 0.0);
    CHECK(h.field[3] == 0.0);
    CHECK(h.support_end() == 3);
    CHECK(t.support_end() == 4);
}

TEST_CASE("constants and affine data are annihilated") {
    const CellField c = field({4, 4, 4, 4, 4});
    const DerivedField tc = tilde(c);
    const DerivedField hc = hat(c);
    for (double x : tc.field.values()) CHECK(x == 0.0);
    for (double x : hc.field.values()) CHECK(x == 0.0);
    std::vector<double> affine(9);
    for (std::size_t i = 0; i < affine.size(); ++i) affine[i] = 0.5 + 2.0 * static_cast<double>(i);
    const DerivedField h = hat(field(affine));
    for (std::size_t i = 1; i + 1 < affine.size(); ++i) CHECK(std::abs(h.field[i]) < 1e-9);
}

TEST_CASE("telescoping of delta") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (std::size_t n : {3u, 5u, 16u, 101u}) {
        std::vector<double> v(n);
        for (double& x : v) x = u(rng);
        const CellField f = field(v);
        const DerivedField d = delta(f);
        double sum = 0.0;
        for (std::size_t i = 1; i < n; ++i) sum += d.field[i];
        CHECK(f.grid().dx() * sum == doctest::Approx(v.back() - v.front()).epsilon(1e-12));
    }
}

TEST_CASE("restriction and injection") {
    const CellField fine = field({1, 3, 5, 7, 9, 11});
    const CellField coarse = restrict_to(fine, Grid(3));
    CHECK(coarse[0] == 2.0);
    CHECK(coarse[1] == 6.0);
    CHECK(coarse[2] == 10.0);

    const CellField c = restrict_to(CellField(Grid(12), 0.3), Grid(4));
    for (double x : c.values()) CHECK(x == 0.3);

    CHECK_THROWS_AS(restrict_to(fine, Grid(4)), std::invalid_argument);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> base(5);
    for (double& x : base) x = u(rng);
    const CellField b = field(base);
    for (std::size_t m : {1u, 2u, 3u, 8u}) CHECK(restrict_to(inject(b, Grid(5 * m)), Grid(5)) == b);
}
