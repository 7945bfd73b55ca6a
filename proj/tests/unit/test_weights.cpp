#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "orbitlets/weights.hpp"

using namespace orbitlets;

namespace {

GroupPoint random_shearlet(const GroupChart& g, std::mt19937_64& rng) {
  return g.shearlet(rng() % 2 ? 1 : -1, std::exp(oracle::uniform(rng, -2, 2)), oracle::uniform(rng, -3, 3));
}

}  // namespace

TEST_CASE("reflected weights") {
  const GroupChart g = make_group("shearlet2d");
  std::mt19937_64 rng(1);
  SUBCASE("|det|^(7/6) with q = 1") {
    const WeightSpec vp = vprime(WeightSpec::det_power(7.0 / 6.0), 1.0);
    for (int k = 0; k < 100; ++k) {
      const GroupPoint h = random_shearlet(g, rng);
      CHECK(vp(h) == doctest::Approx(std::pow(h.det_abs, -2.0 / 3.0)).epsilon(1e-12));
    }
  }
  SUBCASE("constant weight with q = 2") {
    const WeightSpec vp = vprime(WeightSpec{}, 2.0);
    for (int k = 0; k < 20; ++k) CHECK(vp(random_shearlet(g, rng)) == doctest::Approx(1.0));
  }
  SUBCASE("general exponents") {
    for (double q : {1.0, 1.5, 2.0, 4.0, kInf})
      for (double s : {-1.0, 0.0, 0.3, 2.0}) {
        const WeightSpec vp = vprime(WeightSpec::det_power(s), q);
        const double e = (std::isinf(q) ? 0.0 : 1.0 / q) - 0.5 - s;
        for (int k = 0; k < 20; ++k) {
          const GroupPoint h = random_shearlet(g, rng);
          CHECK(vp(h) == doctest::Approx(std::pow(h.det_abs, e)).epsilon(1e-11));
        }
      }
  }
}

TEST_CASE("transplants") {
  std::mt19937_64 rng(4);
  SUBCASE("shearlet |det|^(-2/3) becomes 1/|x|") {
    const GroupChart g = make_group("shearlet2d");
    const WeightSpec vp = WeightSpec::det_power(-2.0 / 3.0);
    for (int k = 0; k < 200; ++k) {
      const Vec xi(oracle::uniform(rng, -4, 4), oracle::uniform(rng, -4, 4));
      if (!g.in_orbit(xi)) continue;
      CHECK(transplant(vp, g, xi) == doctest::Approx(1.0 / std::abs(xi[0])).epsilon(1e-11));
    }
    CHECK_THROWS_AS(transplant(vp, g, Vec(0.0, 1.0)), std::domain_error);
  }
  SUBCASE("constant weight") {
    const GroupChart g = make_group("shearlet2d");
    CHECK(transplant(WeightSpec{}, g, Vec(0.3, 7.0)) == doctest::Approx(1.0));
  }
  SUBCASE("similitude |det|^s becomes |xi|^(2s)") {
    const GroupChart g = make_group("similitude2d");
    for (double s : {-0.5, 0.25, 1.0})
      for (int k = 0; k < 50; ++k) {
        const Vec xi(oracle::uniform(rng, -4, 4), oracle::uniform(rng, -4, 4));
        CHECK(transplant(WeightSpec::det_power(s), g, xi) == doctest::Approx(std::pow(xi.norm(), 2 * s)).epsilon(1e-11));
      }
  }
}

TEST_CASE("discretized weights") {
  SUBCASE("similitude, v = 1, q = 1") {
    const WellSpreadFamily fam(make_group("similitude2d"));
    const InducedCovering cover(fam, BaseSet::annulus(0.5, 2.0), IndexWindow{-4, 4, 0});
    const DiscretizedWeight u = discretize(WeightSpec{}, 1.0, cover);
    for (int k = -4; k <= 4; ++k) CHECK(u.at({k, 0, 1}) == doctest::Approx(std::exp2(k)));
    CHECK(u.moderateness(cover.covering()) == doctest::Approx(2.0));
  }
  SUBCASE("reference point outside Q is rejected") {
    const WellSpreadFamily fam(make_group("similitude2d"));
    const InducedCovering cover(fam, BaseSet::annulus(1.5, 3.0), IndexWindow{0, 1, 0});
    CHECK_THROWS_AS(discretize(WeightSpec{}, 1.0, cover), std::domain_error);
  }
  SUBCASE("declared per index") {
    std::map<LatticeIndex, double> m;
    for (int i = 0; i <= 5; ++i) m[{i, 0, 1}] = std::pow(10.0, -i);
    const DiscretizedWeight u = declared_weights(m, "declared");
    CHECK(u.at({3, 0, 1}) == doctest::Approx(1e-3));
    CHECK_THROWS_AS(u.at({9, 0, 1}), std::out_of_range);
  }
}

TEST_CASE("control weight") {
  SUBCASE("similitude 2I with v0 = |det|^(1/2)") {
    const GroupChart g = make_group("similitude2d");
    CHECK(control_weight(WeightSpec::det_power(0.5), g, g.similitude(2.0, 0.0)) == doctest::Approx(8.0));
  }
  SUBCASE("identity") {
    for (const char* name : {"dyadic1d", "similitude2d", "shearlet2d"}) {
      const GroupChart g = make_group(name);
      const WeightSpec v0{0.7, 1.0, 0.5};
      const double at_one = v0.majorant(Mat::identity(g.dim()));
      CHECK(control_weight(v0, g, g.identity()) == doctest::Approx(at_one * at_one));
    }
  }
  SUBCASE("bounds the weight and is symmetric") {
    const GroupChart g = make_group("shearlet2d");
    const WeightSpec v0{0.4, 0.5, 0.0};
    std::mt19937_64 rng(9);
    for (int k = 0; k < 200; ++k) {
      const GroupPoint h = random_shearlet(g, rng);
      const double w = control_weight(v0, g, h);
      CHECK(w == doctest::Approx(control_weight(v0, g, g.inverse(h))).epsilon(1e-9));
      CHECK(w >= v0.majorant(h.matrix) * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("weights are moderate with respect to their majorant") {
  const GroupChart g = make_group("shearlet2d");
  std::mt19937_64 rng(13);
  const WeightSpec v{0.3, 1.0, -0.5};
  for (int k = 0; k < 500; ++k) {
    const GroupPoint a = random_shearlet(g, rng), b = random_shearlet(g, rng);
    const Mat ab = a.matrix * b.matrix;
    REQUIRE(v(ab) <= v.majorant(a.matrix) * v(b.matrix) * (1.0 + 1e-9));
    REQUIRE(v.majorant(ab) <= v.majorant(a.matrix) * v.majorant(b.matrix) * (1.0 + 1e-9));
  }
}
