#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "orbitlets/transform.hpp"

using namespace orbitlets;

namespace {

FrequencySignal random_line_signal(std::mt19937_64& rng) {
  FrequencySignal f(1);
  const int terms = 1 + int(rng() % 2);
  for (int t = 0; t < terms; ++t)
    f.add(cplx(oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1)), Vec(oracle::uniform(rng, -2, 2)),
          AnalyticWindow::bump(Vec(oracle::uniform(rng, 0.8, 2.0)), oracle::uniform(rng, 0.2, 0.4)));
  return f;
}

}  // namespace

TEST_CASE("coefficients against spatial quadrature of <f, pi(x, h) psi>") {
  const AnalyticWindow psi = default_window(make_group("dyadic1d"));
  std::mt19937_64 rng(19);
  for (int k = 0; k < 6; ++k) {
    const FrequencySignal f = random_line_signal(rng);
    const double a = std::exp2(oracle::uniform(rng, -1.0, 1.0));
    const double x = oracle::uniform(rng, -3, 3);
    const cplx got = wavelet_coefficient(f, psi, Mat(a), Vec(x), 1024);
    const cplx want = oracle::direct_coefficient_1d(f, psi, a, x);
    CAPTURE(a);
    CAPTURE(x);
    CHECK(std::abs(got - want) < 1e-6);
  }
}

TEST_CASE("slices agree with single coefficients") {
  const GroupChart g = make_group("shearlet2d");
  const AnalyticWindow psi = default_window(g);
  FrequencySignal f(2);
  f.add(cplx(1.0, -0.5), Vec(0.4, -0.2), AnalyticWindow::bump(Vec(1.2, 0.9), 0.5));
  f.add(cplx(0.3, 0.0), AnalyticWindow::bump(Vec(1.6, 1.5), 0.4));
  const Mat h = g.shearlet(1, 2.0, 0.5).matrix;
  const FrequencyGrid grid = FrequencyGrid::enclosing(f.support_box(), 1024, 1.25);
  const SampledSignal s = wavelet_slice(f, psi, h, grid);
  for (std::size_t idx : {std::size_t(0), std::size_t(7), grid.flat(3, 1000), grid.flat(900, 5)}) {
    const Vec x = grid.spatial_point(idx);
    const cplx c = wavelet_coefficient(f, psi, h, x);
    const cplx o = oracle::coefficient_2d(f, psi, h, x);
    CHECK(std::abs(c - o) < 1e-6);
    // Spatial samples carry the grid's centering character.
    CHECK(std::abs(std::abs(s.data[idx]) - std::abs(c)) < 1e-6);
  }
}

TEST_CASE("trivial transforms") {
  const AnalyticWindow psi = AnalyticWindow::bump(Vec(1.25), 0.75);
  const double norm2 = oracle::simpson(
      [&](double xi) {
        const double v = psi(Vec(xi));
        return v * v;
      },
      0.5, 2.0, 4000);
  CHECK(std::abs(wavelet_coefficient(FrequencySignal(psi), psi, Mat(1.0), Vec(0.0), 4096) - norm2) < 1e-9);

  const FrequencySignal far(AnalyticWindow::bump(Vec(10.0), 0.5));
  const FrequencyGrid grid(1, 64, 12.0);
  const SampledSignal s = wavelet_slice(far, psi, Mat(1.0), grid);
  CHECK(lp_norm(s, kInf) == 0.0);
  CHECK(coorbit_norm(FrequencySignal(1), psi, GroupGrid::over_window(WellSpreadFamily(make_group("dyadic1d")), {}, {0, 0, 0}),
                     WeightSpec{}, 2, 2)
            .value == 0.0);
}

TEST_CASE("mixed norm of hand-built slices") {
  const GroupChart g = make_group("similitude2d");
  std::vector<SliceValue> s;
  const double norms[] = {1.0, 2.0, 0.5};
  const double radii[] = {1.0, 2.0, 0.5};
  const double weights[] = {0.1, 0.2, 0.3};
  for (int k = 0; k < 3; ++k) {
    SliceValue v;
    v.node.h = g.similitude(radii[k], 0.0);
    v.node.weight = weights[k];
    v.norm = norms[k];
    s.push_back(v);
  }
  const WeightSpec w = WeightSpec::det_power(0.5);
  for (double q : {1.0, 2.0, 3.0}) {
    double want = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double det = radii[k] * radii[k];
      want += weights[k] / det * std::pow(std::sqrt(det) * norms[k], q);
    }
    CHECK(mixed_norm(s, w, q) == doctest::Approx(std::pow(want, 1.0 / q)));
  }
  CHECK(mixed_norm(s, w, kInf) == doctest::Approx(4.0));
  CHECK_THROWS_AS(mixed_norm(s, w, 0.5), std::invalid_argument);
}

TEST_CASE("coorbit norms scale covariantly on the similitude group") {
  const WellSpreadFamily fam(make_group("similitude2d"));
  const AnalyticWindow psi = default_window(fam.chart());
  const QuadratureSpec spec{16, 32};
  FrequencySignal f(2);
  f.add(cplx(1.0, 0.2), Vec(0.5, 0.0), AnalyticWindow::bump(Vec(1.0, 0.6), 0.4));
  const WeightSpec v = WeightSpec::det_power(0.25);
  for (const auto& [p, q] : {std::pair{2.0, 2.0}, std::pair{1.0, 2.0}, std::pair{2.0, 1.0}}) {
    const double base = coorbit_norm(f, psi, GroupGrid::support_driven(f, psi, fam, spec), v, p, q).value;
    for (const GroupPoint& h : {fam.point({1, 0, 1}), fam.chart().similitude(0.5, 0.7)}) {
      const FrequencySignal fk = f.dilated(h.matrix);
      const double got = coorbit_norm(fk, psi, GroupGrid::support_driven(fk, psi, fam, spec), v, p, q).value;
      CAPTURE(p);
      CAPTURE(q);
      CHECK(got / base == doctest::Approx(v(h) * std::pow(h.det_abs, 1.0 / p - 1.0 / q)).epsilon(0.02));
    }
  }
}

TEST_CASE("Parseval on the dyadic group") {
  const WellSpreadFamily fam(make_group("dyadic1d"));
  const AnalyticWindow psi = default_window(fam.chart());
  std::mt19937_64 rng(2);
  for (int k = 0; k < 3; ++k) {
    const ParsevalReport r = parseval_check(random_line_signal(rng), psi, fam, QuadratureSpec{}, 512);
    CHECK(r.rel_error < 0.01);
  }
}

TEST_CASE("localization identity on one dyadic cell") {
  const WellSpreadFamily fam(make_group("dyadic1d"));
  const AnalyticWindow psi = default_window(fam.chart());
  FrequencySignal f(1);
  f.add(cplx(1.0, 0.5), Vec(0.6), AnalyticWindow::bump(Vec(1.3), 0.5));
  const FrequencyGrid grid = FrequencyGrid::enclosing(f.support_box(), 128);
  const auto levels = localization_convergence(f, psi, fam, {0, 0, 1}, {{16, 1}, {32, 1}, {64, 1}}, grid);
  CHECK(levels.back().max_deviation < 1e-4);
  CHECK(levels.back().max_value > 1e-2);
  CHECK(std::log2(levels[1].max_deviation / levels[2].max_deviation) >= 1.95);

  SUBCASE("disjoint supports give zero on both sides") {
    const FrequencySignal far(AnalyticWindow::bump(Vec(20.0), 0.5));
    const LocalizationReport r = localization_identity_check(far, psi, fam, {0, 0, 1}, {16, 1},
                                                             FrequencyGrid::enclosing(far.support_box(), 64));
    CHECK(r.max_value == 0.0);
    CHECK(r.max_deviation == 0.0);
  }
}

TEST_CASE("conjugation covariance") {
  std::mt19937_64 rng(29);
  SUBCASE("identity is exact") {
    const GroupChart g = make_group("shearlet2d");
    const FrequencySignal f(AnalyticWindow::bump(Vec(2.0, 1.0), 0.5));
    const CovarianceValue c =
        conjugation_covariance_check(f, default_window(g), Mat::identity(2), g.shearlet(1, 1.5, 0.3).matrix, Vec(0.2, 0.1));
    CHECK(c.deviation == 0.0);
  }
  SUBCASE("rotation with shearlet h, both sides against the nested-sum oracle") {
    const GroupChart g = make_group("shearlet2d");
    const AnalyticWindow psi = default_window(g);
    const Mat rot(0.0, -1.0, 1.0, 0.0);
    FrequencySignal f(2);
    f.add(cplx(0.7, 0.4), Vec(0.3, 0.0), AnalyticWindow::bump(Vec(-1.2, 1.5), 0.5));
    for (int k = 0; k < 5; ++k) {
      const Mat h = g.shearlet(1, std::exp2(oracle::uniform(rng, -1, 0.5)), oracle::uniform(rng, -1, 1)).matrix;
      const Vec x(oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1));
      const CovarianceValue c = conjugation_covariance_check(f, psi, rot, h, x);
      CHECK(c.deviation < 1e-8);
      const Mat gi = rot.inverse();
      CHECK(std::abs(c.lhs - oracle::coefficient_2d(f.dilated(rot), psi, h, x)) < 1e-6);
      CHECK(std::abs(c.rhs - oracle::coefficient_2d(f, psi.dilated(gi), gi * h * rot, gi * x)) < 1e-6);
    }
  }
  SUBCASE("2I on the similitude group") {
    const GroupChart g = make_group("similitude2d");
    const FrequencySignal f(AnalyticWindow::bump(Vec(0.4, 0.9), 0.5));
    const Mat two = Mat::scalar(2, 2.0);
    for (int k = 0; k < 5; ++k) {
      const Mat h = g.similitude(std::exp2(oracle::uniform(rng, -1, 1)), oracle::uniform(rng, 0, 6)).matrix;
      const Vec x(oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1));
      CHECK(conjugation_covariance_check(f, default_window(g), two, h, x).deviation < 1e-8);
    }
  }
}
