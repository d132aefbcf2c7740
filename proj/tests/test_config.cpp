#include <doctest.h>

#include <string>

#include "fvporous/config.hpp"
#include "fvporous/errors.hpp"

using namespace fvporous;

namespace {

const std::string kProblem =
    "problem.h = linear_plus_sin\n"
    "problem.h.a = 2\n"
    "problem.h.c = 1\n"
    "problem.b = offset_sin\n"
    "problem.b.c0 = 2\n"
    "problem.b.c1 = 1\n"
    "problem.p = separable   # trailing comment\n"
    "problem.p.alpha = 0.5\n"
    "problem.p.k = 1\n"
    "problem.p.omega = 3\n"
    "problem.v0 = cosine\n"
    "problem.v0.a = 0, 1\n"
    "problem.T = 0.25\n";

int error_line(const std::string& text) {
    try {
        parse_run_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST_CASE("parses the default problem") {
    const RunConfig run = parse_run_config("# header\n\n" + kProblem + "disc.n = 32\ntime.method = implicit_euler\n");
    CHECK(run.n == 32);
    CHECK(run.control.method == Method::implicit_euler);
    CHECK_FALSE(run.dt_given);
    CHECK(run.problem->T == 0.25);
    CHECK(run.problem->h.lower() == 1.0);
    CHECK(run.problem->p.sup_bound() == 0.5);
    CHECK(run.echo.at("problem.v0.a") == "0, 1");
}

TEST_CASE("errors carry line numbers") {
    CHECK(error_line(kProblem + "problem.hh = 3\n") == 14);
    CHECK(error_line(kProblem + "disc.nn = 3\n") == 14);
    CHECK(error_line(kProblem + "disc.n = abc\n") == 14);
    CHECK(error_line(kProblem + "disc.n = 2\n") == 14);
    CHECK(error_line(kProblem + "no equals sign\n") == 14);
    CHECK(error_line(kProblem + "problem.T = 1\n") == 14);
    CHECK(error_line(kProblem + "time.checkpoints = 0\n") == 14);
    CHECK(error_line(kProblem + "time.method = rk4\n") == 14);

    std::string bad_h = kProblem;
    bad_h.replace(bad_h.find("problem.h.c = 1"), 15, "problem.h.c = 2");
    CHECK(error_line(bad_h) == 1);

    std::string unknown_family = kProblem;
    unknown_family.replace(unknown_family.find("offset_sin"), 10, "quadratic");
    CHECK(error_line(unknown_family) == 4);
}

TEST_CASE("missing keys and values") {
    CHECK_THROWS_AS(parse_run_config("problem.h = linear\n"), ConfigError);
    CHECK(error_line("problem.h =\n") == 1);
    CHECK_THROWS_WITH_AS(parse_run_config("problem.h = linear\nproblem.h.a = 1\n"),
                         doctest::Contains("problem.b"), ConfigError);
}

TEST_CASE("typed getters") {
    const KeyValueConfig cfg = KeyValueConfig::parse("a = 1.5\nb = 7\nc = 1, 2 ,3\nd = +2e-3\n");
    CHECK(cfg.get_double("a") == 1.5);
    CHECK(cfg.get_unsigned("b") == 7);
    CHECK(cfg.get_double_list("c") == std::vector<double>{1, 2, 3});
    CHECK(cfg.get_double("d") == 2e-3);
    CHECK_THROWS_AS(cfg.get_unsigned("a"), ConfigError);
    CHECK_FALSE(cfg.find_double("zzz").has_value());
    CHECK_THROWS_AS(KeyValueConfig::parse("x = 1\nx = 2\n"), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::parse(".x = 1\n"), ConfigError);
}
