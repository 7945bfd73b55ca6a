#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "orbitlets/bapu.hpp"

using namespace orbitlets;

TEST_CASE("dyadic Calderon constant against a Simpson oracle") {
  const GroupChart g = make_group("dyadic1d");
  const WellSpreadFamily fam(g);
  const AnalyticWindow psi = AnalyticWindow::bump(Vec(1.25), 0.75);  // supported in (1/2, 2)
  const double want = oracle::calderon_1d(psi);
  CHECK(calderon_constant(psi, g, 4096) == doctest::Approx(want).epsilon(1e-7));
  // About 10^4 nodes over the cells that see a probe.
  const CalderonReport r = calderon(psi, fam, QuadratureSpec{4096, 1}, {Vec(0.5), Vec(1.0), Vec(3.0)});
  for (double v : r.values) CHECK(v == doctest::Approx(want).epsilon(1e-6));
  CHECK(r.max_rel_deviation < 1e-6);
}

TEST_CASE("zero windows have zero Calderon integrals") {
  const WellSpreadFamily fam(make_group("dyadic1d"));
  const CellQuadrature quad(fam, QuadratureSpec{});
  CHECK(calderon_integral(AnalyticWindow::zero(1), quad, Vec(1.0)) == 0.0);
  CHECK(calderon_constant(AnalyticWindow::zero(1), fam.chart()) == 0.0);
}

TEST_CASE("shearlet Calderon integral is constant on the orbit") {
  const WellSpreadFamily fam(make_group("shearlet2d"));
  const AnalyticWindow psi = default_window(fam.chart());
  std::mt19937_64 rng(31);
  std::vector<Vec> probes;
  while (probes.size() < 20) {
    const Vec xi(oracle::uniform(rng, -3, 3), oracle::uniform(rng, -3, 3));
    if (std::abs(xi[0]) > 0.2) probes.push_back(xi);
  }
  const CalderonReport r = calderon(psi, fam, QuadratureSpec{}, probes);
  CHECK(r.max_rel_deviation < 1e-4);
  const CalderonReport fine = calderon(psi, fam, QuadratureSpec{}.refined(), probes);
  CHECK(fine.max_rel_deviation < r.max_rel_deviation);
}

TEST_CASE("dyadic BAPU") {
  const WellSpreadFamily fam(make_group("dyadic1d"));
  const AnalyticWindow psi = default_window(fam.chart());
  const Bapu bapu(psi, fam, QuadratureSpec::for_chart(GroupKind::dyadic1d));

  SUBCASE("partition of unity") {
    std::mt19937_64 rng(6);
    for (int k = 0; k < 200; ++k) {
      const double x = (rng() % 2 ? 1.0 : -1.0) * std::exp2(oracle::uniform(rng, -4, 4));
      REQUIRE(bapu.sum(Vec(x)) == doctest::Approx(1.0).epsilon(1e-4));
    }
  }
  SUBCASE("L1 bound of the k = 0 cell") {
    const L1Bound b = bapu_l1_norm(bapu, {0, 0, 1}, 4096);
    const Box s = psi.support_box();
    const double gamma = oracle::inverse_l1_1d(
        [&](double xi) {
          const double v = psi(Vec(xi));
          return v * v;
        },
        s.lo[0], s.hi[0]);
    CHECK(b.gamma_l1 == doctest::Approx(gamma).epsilon(5e-4));
    CHECK(b.bound == doctest::Approx(std::log(2.0) * gamma / bapu.C()).epsilon(5e-4));
    CHECK(bapu.family().cell_measure() == doctest::Approx(std::log(2.0)));
    CHECK(b.within(1e-3));
  }
  SUBCASE("coarse grids are rejected") { CHECK_THROWS_AS(bapu_l1_norm(bapu, {0, 0, 1}, 8), std::domain_error); }
}

TEST_CASE("similitude BAPU is dilation covariant") {
  const WellSpreadFamily fam(make_group("similitude2d"));
  const Bapu bapu(default_window(fam.chart()), fam, QuadratureSpec::for_chart(GroupKind::similitude2d));
  std::mt19937_64 rng(12);
  for (int n = 0; n < 30; ++n) {
    const double r = std::exp2(oracle::uniform(rng, -1.5, 1.5)), a = oracle::uniform(rng, 0, 2 * kPi);
    const Vec xi(r * std::cos(a), r * std::sin(a));
    for (int k : {-2, 1, 3}) {
      const double s = std::exp2(k);
      CHECK(bapu.phi({k, 0, 1}, xi * s) == doctest::Approx(bapu.phi({0, 0, 1}, xi)).epsilon(1e-9));
    }
  }
}

TEST_CASE("every probe sees nonnegative phis that sum to one") {
  const WellSpreadFamily fam(make_group("shearlet2d"));
  const Bapu bapu(default_window(fam.chart()), fam, QuadratureSpec::for_chart(GroupKind::shearlet2d));
  std::mt19937_64 rng(41);
  for (int n = 0; n < 40; ++n) {
    const Vec xi(oracle::uniform(rng, 0.3, 3) * (rng() % 2 ? 1 : -1), oracle::uniform(rng, -3, 3));
    double s = 0.0;
    for (const auto& [i, v] : bapu.phis(xi)) {
      REQUIRE(v >= 0.0);
      REQUIRE(bapu.support_box(i).contains(xi));
      s += v;
    }
    REQUIRE(s == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("framed shearlet samples match pointwise phi") {
  const WellSpreadFamily fam(make_group("shearlet2d"));
  const Bapu bapu(default_window(fam.chart()), fam, QuadratureSpec::for_chart(GroupKind::shearlet2d));
  const LatticeIndex i{1, -1, -1};
  const Mat frame = fam.point(i).matrix.transpose().inverse();
  const FrequencyGrid grid = FrequencyGrid::centered_on(bapu.base_set().bounding_box(), 64, 1.25);
  const CArray framed = bapu.sample(i, grid, nullptr, &frame);
  std::mt19937_64 rng(8);
  double worst = 0.0, largest = 0.0;
  for (int n = 0; n < 200; ++n) {
    const int m0 = int(rng() % 64) - 32, m1 = int(rng() % 64) - 32;
    const Vec eta(grid.center()[0] + m0 * grid.dxi(), grid.center()[1] + m1 * grid.dxi());
    const double want = bapu.phi(i, frame * eta);
    const double got = framed[std::size_t(grid.array_index(m0)) * 64 + std::size_t(grid.array_index(m1))].real();
    worst = std::max(worst, std::abs(got - want));
    largest = std::max(largest, want);
  }
  CHECK(largest > 0.1);
  CHECK(worst < 1e-12);
}

TEST_CASE("elongated shearlet supports get finite L1 norms within the bound") {
  const WellSpreadFamily fam(make_group("shearlet2d"));
  const Bapu bapu(default_window(fam.chart()), fam, QuadratureSpec::for_chart(GroupKind::shearlet2d));
  const L1Bound b = bapu_l1_norm(bapu, {1, -1, -1}, 256);
  CHECK(b.norm > 0.0);
  CHECK(b.within(1e-3));
  // The L1 norm is invariant under the lattice, so it matches the identity index.
  CHECK(b.norm == doctest::Approx(bapu_l1_norm(bapu, {0, 0, 1}, 256).norm).epsilon(0.02));
}
