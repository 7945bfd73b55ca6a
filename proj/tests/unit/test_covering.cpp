#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "orbitlets/covering.hpp"

using namespace orbitlets;

namespace {

std::set<int> cluster_scales(const Covering& c, const ClusterTable& t, const LatticeIndex& i) {
  std::set<int> out;
  for (int n : t.neighbors[std::size_t(c.find(i))]) out.insert(c.members()[std::size_t(n)].index.scale);
  return out;
}

}  // namespace

TEST_CASE("similitude dyadic covering") {
  const WellSpreadFamily fam(make_group("similitude2d"));
  const InducedCovering cover(fam, BaseSet::annulus(0.5, 2.0), IndexWindow{-8, 8, 0});
  REQUIRE(cover.covering().size() == 17);

  SUBCASE("members are dyadic annuli") {
    for (int k : {-3, 0, 2}) {
      const LatticeIndex i{k, 0, 1};
      const double s = std::exp2(k);
      CHECK(cover.contains(i, Vec(s, 0.0)));
      CHECK(cover.contains(i, Vec(0.0, -1.9 * s)));
      CHECK_FALSE(cover.contains(i, Vec(0.49 * s, 0.0)));
      CHECK_FALSE(cover.contains(i, Vec(2.01 * s, 0.0)));
    }
  }
  SUBCASE("clusters") {
    const ClusterTable t = clusters(cover.covering());
    CHECK(cluster_scales(cover.covering(), t, {0, 0, 1}) == std::set<int>{-1, 0, 1});
    CHECK(t.max_cluster == 3);
    CHECK(t.symmetric());
    CHECK(t.reflexive());
  }
  SUBCASE("structured with the inner annulus P") {
    const StructureCertificate cert =
        structured_check(cover, BaseSet::annulus(2.0 / 3.0, 1.5), Box{Vec(0.05, 0.05), Vec(40.0, 40.0)});
    CHECK(cert.is_structured);
    CHECK(cert.C <= 2.0 + 1e-12);
    CHECK(cert.n0 == 3);
  }
}

TEST_CASE("a single index is trivially structured") {
  const WellSpreadFamily fam(make_group("similitude2d"));
  const InducedCovering cover(fam, BaseSet::annulus(0.5, 2.0), IndexWindow{0, 0, 0});
  const ClusterTable t = clusters(cover.covering());
  CHECK(t.max_cluster == 1);
  const StructureCertificate cert =
      structured_check(cover, BaseSet::annulus(2.0 / 3.0, 1.5), Box{Vec(0.8, 0.0), Vec(1.2, 0.3)});
  CHECK(cert.is_structured);
  CHECK(cert.C == doctest::Approx(1.0));
}

TEST_CASE("dyadic intervals cover the punctured line") {
  const WellSpreadFamily fam(make_group("dyadic1d"));
  const InducedCovering cover(fam, BaseSet::symmetric_interval(0.5, 2.0), IndexWindow{-6, 6, 0});
  std::mt19937_64 rng(2);
  for (int k = 0; k < 500; ++k) {
    const double x = (rng() % 2 ? 1.0 : -1.0) * std::exp2(oracle::uniform(rng, -5.0, 5.0));
    bool covered = false;
    for (std::size_t m = 0; m < cover.covering().size(); ++m) covered = covered || cover.covering().member_contains(m, Vec(x));
    REQUIRE(covered);
  }
  CHECK_NOTHROW(cover.require_coverage(Box{Vec(0.05), Vec(20.0)}));
  CHECK_THROWS_AS(cover.require_coverage(Box{Vec(0.001), Vec(0.002)}), std::domain_error);
}

TEST_CASE("base sets touching the blind spot are rejected") {
  const WellSpreadFamily fam(make_group("shearlet2d"));
  CHECK_THROWS_AS(InducedCovering(fam, BaseSet::box(Vec(0.0, -1.0), Vec(1.0, 1.0)), IndexWindow{0, 1, 1}),
                  std::domain_error);
  CHECK_THROWS_AS(InducedCovering(fam, BaseSet::box(Vec(-1.0, -1.0), Vec(1.0, 1.0)), IndexWindow{0, 1, 1}),
                  std::domain_error);
}

TEST_CASE("affine translates of (-3/4, 3/4)") {
  const Covering c = affine_translates(BaseSet::interval(-0.75, 0.75), -10, 10);
  const ClusterTable t = clusters(c);
  CHECK(t.exact);
  for (std::size_t m = 0; m < c.size(); ++m) {
    const int i = c.members()[m].index.scale;
    for (int n : t.neighbors[m]) CHECK(std::abs(c.members()[std::size_t(n)].index.scale - i) <= 1);
  }
  CHECK(t.max_cluster == 3);
}

TEST_CASE("cluster tables are symmetric and reflexive on random windows") {
  for (const char* name : {"dyadic1d", "similitude2d", "shearlet2d"}) {
    CAPTURE(name);
    const WellSpreadFamily fam(make_group(name));
    const BaseSet q = fam.chart().kind() == GroupKind::dyadic1d      ? BaseSet::interval(0.5, 2.0)
                      : fam.chart().kind() == GroupKind::similitude2d ? BaseSet::annulus(0.5, 2.0)
                                                                      : BaseSet::box(Vec(0.5, -1.0), Vec(2.0, 1.0));
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
      const int lo = int(rng() % 5) - 4;
      const IndexWindow w{lo, lo + int(rng() % 4), int(rng() % 4)};
      const ClusterTable t = clusters(InducedCovering(fam, q, w).covering());
      CHECK(t.symmetric());
      CHECK(t.reflexive());
      CHECK(t.max_cluster >= 1);
    }
  }
}
