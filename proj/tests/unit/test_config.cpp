#include <sstream>

#include "doctest.h"
#include "orbitlets/config.hpp"
#include "orbitlets/scenarios.hpp"

using namespace orbitlets;

TEST_CASE("configuration files") {
  std::istringstream in(
      "# comment\n"
      "group = similitude2d\n"
      "p = inf   # trailing comment\n"
      "index.scale_lo = -5\n"
      "input.10 = 1, 0, 0.5, 1, 0\n"
      "input.2 = 0, 1, 0.5, 1, 0\n");
  const Config c = Config::parse(in, "test.cfg");
  CHECK(c.text("group") == "similitude2d");
  CHECK(std::isinf(c.real("p")));
  CHECK(c.integer("index.scale_lo") == -5);
  CHECK(c.integer("index.scale_hi") == 3);
  CHECK(c.keys_with_prefix("input.") == std::vector<std::string>{"input.2", "input.10"});
  CHECK(c.reals("input.10").size() == 5);
  CHECK(c.resolved()["group"] == "similitude2d");
}

TEST_CASE("configuration errors carry their origin") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return Config::parse(in, "bad.cfg");
  };
  CHECK_THROWS_WITH_AS(parse("group = dyadic1d\nbogus = 3\n"), doctest::Contains("bad.cfg:2"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse("p = two\n"), doctest::Contains("not a real"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse("seed = 1.5\n"), doctest::Contains("not an integer"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse("just words\n"), doctest::Contains("key = value"), std::invalid_argument);
  CHECK_THROWS_AS(Config::load("/nonexistent/orbitlets.cfg"), std::runtime_error);
}

TEST_CASE("overrides") {
  Config c;
  c.apply_override("grid.n=64");
  CHECK(c.integer("grid.n") == 64);
  CHECK_THROWS_AS(c.apply_override("grid.n"), std::invalid_argument);
  CHECK_THROWS_AS(c.apply_override("nope=1"), std::invalid_argument);
  CHECK_THROWS_AS(c.real("grid.n"), std::logic_error);
}

TEST_CASE("line fits") {
  const LineFit f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(fit_line({0, 1, 2, 3}, {0, 1, 0, 1}).r2 < 0.5);
}

TEST_CASE("scenarios") {
  CHECK_THROWS_AS(run_scenario("no-such-scenario", Config()), std::invalid_argument);
  const auto names = scenario_names();
  CHECK(names.size() == 11);

  SUBCASE("dyadic covering statistics") {
    Config c;
    c.set("group", "dyadic1d");
    const ScenarioResult r = run_scenario("covering-stats", c);
    CHECK(r.passed());
    CHECK(r.report["config"]["group"] == "dyadic1d");
    CHECK_FALSE(r.tables.empty());
  }
  SUBCASE("Cauchy example") {
    const ScenarioResult r = run_scenario("cauchy-example", Config());
    CHECK(r.passed());
  }
  SUBCASE("shear-rotation validates its cutoffs") {
    Config c;
    c.set("epsilons", "0.1, 0.2");
    CHECK_THROWS_WITH_AS(run_scenario("shear-rotation", c), doctest::Contains("decreasing"), std::invalid_argument);
    c.set("group", "similitude2d");
    CHECK_THROWS_AS(run_scenario("shear-rotation", c), std::invalid_argument);
  }
  SUBCASE("off-orbit windows are rejected") {
    Config c;
    c.set("window.kind", "bump");
    c.set("window.center", "0, 3");
    c.set("window.radius", "1");
    CHECK_THROWS_AS(run_scenario("bapu-check", c), std::domain_error);
  }
}
