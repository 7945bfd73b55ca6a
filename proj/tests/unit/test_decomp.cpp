#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "orbitlets/decomp.hpp"

using namespace orbitlets;

namespace {

DiscretizedWeight tenths(int first, int last) {
  std::map<LatticeIndex, double> u;
  for (int i = first; i <= last; ++i) u[{i, 0, 1}] = std::pow(10.0, -i);
  return declared_weights(u, "10^-i");
}

double inverse_l1(const AnalyticWindow& w) {
  const Box b = w.support_box();
  return oracle::inverse_l1_1d([&](double xi) { return w(Vec(xi)); }, b.lo[0], b.hi[0]);
}

}  // namespace

TEST_CASE("localize") {
  const FrequencyGrid grid(2, 128, 3.0);
  const FrequencySignal f(AnalyticWindow::bump(Vec(1.0, 0.5), 0.8));
  const SampledSignal fh = sample_frequency(grid, [&](const Vec& xi) { return f(xi); });
  const SampledSignal direct = to_spatial(fh);
  const SampledSignal ones = localize(fh, CArray(grid.size(), cplx(1.0)));
  double err = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) err = std::max(err, std::abs(ones.data[k] - direct.data[k]));
  CHECK(err < 1e-12);
  CHECK(lp_norm(localize(fh, CArray(grid.size(), cplx(0.0))), kInf) == 0.0);
}

TEST_CASE("translate partition") {
  const TranslatePartition part(-2, 12);
  std::mt19937_64 rng(4);
  for (int k = 0; k < 1000; ++k) {
    const double x = oracle::uniform(rng, -1.0, 10.0);
    double s = 0.0;
    for (const auto& i : part.indices_meeting(Box{Vec(x), Vec(x)})) s += part.value(i, Vec(x));
    REQUIRE(s == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(TranslatePartition::theta(0.25) == 1.0);
  CHECK(TranslatePartition::theta(-0.2) == 1.0);
  CHECK(TranslatePartition::theta(0.75) == 0.0);
}

TEST_CASE("decomposition norms on the translate covering") {
  const TranslatePartition part(0, 10);
  const DiscretizedWeight u = tenths(0, 10);
  const AnalyticWindow bump = AnalyticWindow::bump(Vec(3.0), 0.2);
  const FrequencySignal f(bump);

  SUBCASE("one bump inside a plateau") {
    CHECK(decomp_norm(f, part, u, 1.0, 1.0).value == doctest::Approx(1e-3 * inverse_l1(bump)).epsilon(1e-3));
    const double l2 = std::sqrt(oracle::simpson(
        [&](double xi) {
          const double v = bump(Vec(xi));
          return v * v;
        },
        2.8, 3.2, 2000));
    CHECK(decomp_norm(f, part, u, 2.0, 2.0).value == doctest::Approx(1e-3 * l2).epsilon(1e-6));
  }
  SUBCASE("zero signal") { CHECK(decomp_norm(FrequencySignal(1), part, u, 1.0, 1.0).value == 0.0); }
  SUBCASE("homogeneity") {
    FrequencySignal g(1);
    g.add(cplx(1.0, 0.0), Vec(0.4), AnalyticWindow::bump(Vec(2.4), 0.5));
    g.add(cplx(0.0, 2.0), AnalyticWindow::bump(Vec(4.0), 0.3));
    for (double p : {1.0, 2.0, 3.0}) {
      const double a = decomp_norm(g, part, u, p, 1.5).value;
      const double b = decomp_norm(g.scaled(cplx(-3.0, 4.0)), part, u, p, 1.5).value;
      CHECK(b == doctest::Approx(5.0 * a).epsilon(1e-10));
    }
  }
  SUBCASE("missing weights are named") {
    CHECK_THROWS_WITH_AS(decomp_norm(FrequencySignal(AnalyticWindow::bump(Vec(9.9), 0.2)), part, tenths(0, 9), 1.0, 1.0),
                         doctest::Contains("(10,0,+)"), std::domain_error);
  }
}

TEST_CASE("Cauchy example") {
  const Box span{Vec(-0.75), Vec(4.75)};
  const FrequencyGrid grid = FrequencyGrid::enclosing(span, next_pow2(2.0 * 1.25 * span.max_norm() / (0.4 / 64)));
  const double psi1 = inverse_l1(cauchy_bump());
  const CauchyResult r = cauchy_example(2, 1, grid);
  CHECK(r.norm == doctest::Approx(psi1 * 0.16).epsilon(0.02));
  CHECK(r.closed_form == doctest::Approx(psi1 * 0.16).epsilon(0.02));
  CHECK(r.rel_err < 0.02);
  CHECK(cauchy_example(2, 2, grid).norm == 0.0);
  const double d1 = cauchy_example(2, 1, grid).norm, d2 = cauchy_example(3, 2, grid).norm;
  CHECK(d2 / d1 == doctest::Approx(0.4).epsilon(0.01 / 0.4));
}

TEST_CASE("framed pieces agree with axis-aligned pieces") {
  const WellSpreadFamily fam(make_group("shearlet2d"));
  const Bapu bapu(default_window(fam.chart()), fam, QuadratureSpec::for_chart(GroupKind::shearlet2d));
  const BapuPartition part(bapu);
  FrequencySignal f(2);
  f.add(cplx(1.0, 0.3), Vec(0.2, -0.5), AnalyticWindow::bump(Vec(1.5, 0.8), 0.4));
  const InducedCovering cover(fam, bapu.base_set(), IndexWindow{-4, 4, 6});
  const DiscretizedWeight u = discretize_at(WeightSpec{}, 2.0, cover, bapu.window().center());
  DecompOptions framed;
  framed.prefer_frame = true;
  for (double p : {1.0, 2.0}) {
    const NormReport a = decomp_norm(f, part, u, p, p), b = decomp_norm(f, part, u, p, p, framed);
    REQUIRE(a.pieces.size() == b.pieces.size());
    for (std::size_t k = 0; k < a.pieces.size(); ++k) {
      CAPTURE(a.pieces[k].label);
      CHECK(b.pieces[k].local == doctest::Approx(a.pieces[k].local).epsilon(p == 2.0 ? 1e-8 : 1e-3));
    }
  }
}
