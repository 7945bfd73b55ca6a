#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "orbitlets/group.hpp"

using namespace orbitlets;

namespace {

bool close(const Mat& a, const Mat& b, double tol) {
  for (int r = 0; r < a.dim(); ++r)
    for (int c = 0; c < a.dim(); ++c)
      if (std::abs(a(r, c) - b(r, c)) > tol) return false;
  return true;
}

GroupPoint random_element(const GroupChart& g, std::mt19937_64& rng) {
  ChartParams p;
  const auto br = g.branches();
  p.branch = br[rng() % br.size()];
  p.coords = {oracle::uniform(rng, -3.0, 3.0), oracle::uniform(rng, -3.0, 3.0)};
  if (g.kind() == GroupKind::dyadic1d) p.coords[1] = 0.0;
  return g.element(p);
}

}  // namespace

TEST_CASE("shearlet element and dual action") {
  const GroupChart g = make_group("shearlet2d");
  const GroupPoint h = g.shearlet(1, 4.0, 1.0);
  CHECK(close(h.matrix, Mat(4.0, 1.0, 0.0, 2.0), 1e-14));
  CHECK(h.det_abs == doctest::Approx(8.0));
  const Vec eta = g.dual_action(h, Vec(1.0, 0.0));
  CHECK(eta[0] == doctest::Approx(4.0));
  CHECK(eta[1] == doctest::Approx(1.0));
  CHECK_FALSE(g.in_orbit(Vec(0.0, 5.0)));
  CHECK(g.in_orbit(Vec(-0.1, 5.0)));
}

TEST_CASE("similitude elements") {
  const GroupChart g = make_group("similitude2d");
  CHECK(close(g.similitude(1.0, 0.0).matrix, Mat::identity(2), 1e-15));
  const Vec eta = g.dual_action(g.similitude(2.0, 0.0), Vec(1.0, 1.0));
  CHECK(eta[0] == doctest::Approx(2.0));
  CHECK(eta[1] == doctest::Approx(2.0));
  CHECK_FALSE(g.in_orbit(Vec(0.0, 0.0)));
}

TEST_CASE("unknown group names are rejected") {
  CHECK_THROWS_WITH_AS(make_group("affine3d"), doctest::Contains("affine3d"), std::invalid_argument);
}

TEST_CASE("cross sections solve h^T xi0 = xi") {
  SUBCASE("shearlet") {
    const GroupChart g = make_group("shearlet2d");
    const GroupPoint id = g.cross_section(Vec(1.0, 0.0));
    CHECK(close(id.matrix, Mat::identity(2), 1e-14));
    const GroupPoint h = g.cross_section(Vec(4.0, 2.0));
    CHECK(h.params.branch == 1);
    CHECK(close(h.matrix, g.shearlet(1, 4.0, 2.0).matrix, 1e-12));
    CHECK_THROWS_AS(g.cross_section(Vec(0.0, 1.0)), std::domain_error);
  }
  SUBCASE("similitude") {
    const GroupChart g = make_group("similitude2d");
    const GroupPoint h = g.cross_section(Vec(0.0, 2.0));
    const Vec back = g.dual_action(h, g.base_point());
    CHECK(back.norm() == doctest::Approx(2.0));
    CHECK(back[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(back[1] == doctest::Approx(2.0));
    CHECK(std::sqrt(h.det_abs) == doctest::Approx(2.0));
  }
}

TEST_CASE("modular functions") {
  SUBCASE("similitude is unimodular") {
    const GroupChart g = make_group("similitude2d");
    std::mt19937_64 rng(3);
    for (int k = 0; k < 20; ++k) CHECK(g.modular_H(random_element(g, rng)) == 1.0);
  }
  SUBCASE("shearlet against right-translation Jacobians") {
    const GroupChart g = make_group("shearlet2d");
    CHECK(g.modular_H(g.shearlet(1, 1.0, 0.0)) == doctest::Approx(1.0));
    const GroupPoint h = g.shearlet(1, 4.0, 0.0);
    const ChartParams at{1, {0.3, -0.7}};
    CHECK(g.modular_H(h) == doctest::Approx(oracle::right_translation_jacobian(g, at, h)).epsilon(1e-7));
    CHECK(g.modular_G(h) == doctest::Approx(g.modular_H(h) / 8.0));
    std::mt19937_64 rng(5);
    for (int k = 0; k < 50; ++k) {
      const GroupPoint r = random_element(g, rng);
      CHECK(g.modular_H(r) == doctest::Approx(oracle::right_translation_jacobian(g, at, r)).epsilon(1e-6));
    }
  }
}

TEST_CASE("group laws hold for random elements") {
  for (const char* name : {"dyadic1d", "similitude2d", "shearlet2d"}) {
    CAPTURE(name);
    const GroupChart g = make_group(name);
    std::mt19937_64 rng(11);
    for (int k = 0; k < 1000; ++k) {
      const GroupPoint a = random_element(g, rng), b = random_element(g, rng);
      const GroupPoint e = g.multiply(a, g.inverse(a));
      REQUIRE(close(e.matrix, Mat::identity(g.dim()), 1e-9));
      const GroupPoint ab = g.multiply(a, b);
      REQUIRE(close(ab.matrix, a.matrix * b.matrix, 1e-9 * (1.0 + a.matrix.spectral_norm() * b.matrix.spectral_norm())));
      REQUIRE(ab.det_abs == doctest::Approx(a.det_abs * b.det_abs).epsilon(1e-12));
      const GroupPoint back = g.from_matrix(a.matrix);
      REQUIRE(back.params.branch == a.params.branch);
      REQUIRE(close(back.matrix, a.matrix, 1e-9 * (1.0 + a.matrix.spectral_norm())));
      // (ab)^T xi = b^T a^T xi
      const Vec xi = g.dim() == 1 ? Vec(0.7) : Vec(0.7, -0.4);
      const Vec lhs = g.dual_action(ab, xi), rhs = g.dual_action(b, g.dual_action(a, xi));
      REQUIRE((lhs - rhs).norm() <= 1e-9 * (1.0 + lhs.norm()));
    }
  }
}

TEST_CASE("cross sections land on the requested frequency") {
  for (const char* name : {"dyadic1d", "similitude2d", "shearlet2d"}) {
    CAPTURE(name);
    const GroupChart g = make_group(name);
    std::mt19937_64 rng(17);
    for (int k = 0; k < 1000; ++k) {
      Vec xi = g.dim() == 1 ? Vec(oracle::uniform(rng, -5, 5)) : Vec(oracle::uniform(rng, -5, 5), oracle::uniform(rng, -5, 5));
      if (!g.in_orbit(xi)) continue;
      const Vec back = g.dual_action(g.cross_section(xi), g.base_point());
      REQUIRE((back - xi).norm() <= 1e-10 * (1.0 + xi.norm()));
    }
  }
}
