#include "orbitlets/transform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace orbitlets {

namespace {

// Integration frame for G(zeta) = f_hat(zeta) psi_hat(h^T zeta): zeta = m eta with
// eta ranging over `region`. Candidates are the signal frame m = I, the window frame
// m = h^{-T} and the frames in which one signal term is round.
struct Frame {
  Mat m;
  Box region;
  double step = 0.0;   // largest admissible sample spacing in eta
  bool empty = false;
};

Frame make_frame(const FrequencySignal& f, const AnalyticWindow& psi, const Mat& h, const Mat& m, const Vec& x) {
  const int d = f.dim();
  const Mat ht = h.transpose();
  Frame fr;
  fr.m = m;
  const Mat to_eta = m.inverse();
  Box region = psi.support_box(to_eta * ht.inverse());
  bool any = false;
  Box fbox;
  double feature = psi.feature_scale(ht * fr.m);
  const double x_reach = (fr.m.transpose() * x).norm();
  double reach = x_reach;
  for (const auto& t : f.terms()) {
    if (t.window.is_zero() || t.coefficient == 0.0) continue;
    const Box b = t.window.support_box(to_eta);
    fbox = any ? fbox.unite(b) : b;
    any = true;
    feature = std::min(feature, t.window.feature_scale(fr.m));
    if (t.shift.dim() == d) reach = std::max(reach, x_reach + (fr.m.transpose() * t.shift).norm());
  }
  if (!any) {
    fr.empty = true;
    return fr;
  }
  fr.region = region.intersect(fbox);
  if (fr.region.empty()) {
    fr.empty = true;
    return fr;
  }
  // Resolve the profiles and keep the spatial content away from the period.
  fr.step = std::min(feature / 8.0, 1.0 / (2.0 * (reach + 12.0 / feature)));
  return fr;
}

Frame best_frame(const FrequencySignal& f, const AnalyticWindow& psi, const Mat& h, const Vec& x) {
  Frame best = make_frame(f, psi, h, Mat::identity(f.dim()), x);
  if (best.empty) return best;
  std::vector<Mat> others = {h.transpose().inverse()};
  for (const auto& t : f.terms())
    if (!t.window.is_zero() && t.coefficient != 0.0) others.push_back(t.window.shape().inverse());
  // Fewer samples per axis wins.
  auto cost = [](const Frame& fr) { return fr.region.max_half_side() / fr.step; };
  for (const Mat& m : others) {
    const Frame fr = make_frame(f, psi, h, m, x);
    if (cost(fr) < cost(best)) best = fr;
  }
  return best;
}

// Samples of G(m eta) |det h|^{1/2} on a grid around the frame region.
SampledSignal frame_samples(const FrequencySignal& f, const AnalyticWindow& psi, const Mat& h, const Frame& fr,
                            int n, double margin) {
  const FrequencyGrid grid = FrequencyGrid::centered_on(fr.region, n, margin);
  const Mat ht = h.transpose();
  const double amp = std::sqrt(std::abs(h.det()));
  return sample_frequency(grid, fr.region, [&](const Vec& eta) {
    const Vec zeta = fr.m * eta;
    const double w = psi(ht * zeta);
    return w == 0.0 ? cplx(0.0) : amp * f(zeta) * w;
  });
}

void require_same_dim(const FrequencySignal& f, const AnalyticWindow& psi) {
  if (f.dim() != psi.dim()) throw std::invalid_argument("signal and window differ in dimension");
}

}  // namespace

// ---------------------------------------------------------------------------
// Group grids

GroupGrid::GroupGrid(const WellSpreadFamily& family, const QuadratureSpec& spec, std::set<LatticeIndex> cells)
    : quad_(family, spec), cells_(std::move(cells)) {}

GroupGrid GroupGrid::support_driven(const FrequencySignal& f, const AnalyticWindow& psi,
                                    const WellSpreadFamily& family, const QuadratureSpec& spec) {
  require_same_dim(f, psi);
  std::set<LatticeIndex> cells;
  if (!f.is_zero() && !psi.is_zero()) {
    const CellQuadrature quad(family, spec);
    const int shear_pad = family.uses_shear() ? 1 : 0;
    for (const auto& c : quad.cells(quad.footprint(f.support_box(), psi.support_box())))
      for (int ds = -1; ds <= 1; ++ds)
        for (int dk = -shear_pad; dk <= shear_pad; ++dk) cells.insert({c.scale + ds, c.shear + dk, c.branch});
  }
  return GroupGrid(family, spec, std::move(cells));
}

GroupGrid GroupGrid::over_window(const WellSpreadFamily& family, const QuadratureSpec& spec, const IndexWindow& w) {
  const auto list = family.enumerate(w);
  return GroupGrid(family, spec, std::set<LatticeIndex>(list.begin(), list.end()));
}

GroupGrid GroupGrid::refined() const { return GroupGrid(family(), quad_.spec().refined(), cells_); }

std::string GroupGrid::describe() const {
  std::ostringstream os;
  os << cells_.size() << " cells of " << to_string(family().chart().kind()) << ", " << quad_.nodes_per_cell()
     << " nodes per cell";
  if (!cells_.empty()) {
    int lo = cells_.begin()->scale, hi = lo, kmax = 0;
    for (const auto& c : cells_) {
      lo = std::min(lo, c.scale);
      hi = std::max(hi, c.scale);
      kmax = std::max(kmax, std::abs(c.shear));
    }
    os << ", scales " << lo << ".." << hi;
    if (family().uses_shear()) os << ", |shear| <= " << kmax;
  }
  return os.str();
}

std::vector<QuadNode> GroupGrid::nodes_for(const FrequencySignal& f, const AnalyticWindow& psi) const {
  std::vector<QuadNode> out;
  if (f.is_zero() || psi.is_zero()) return out;
  const Footprint fp = quad_.footprint(f.support_box(), psi.support_box());
  for (const auto& c : cells_) quad_.visit(c, fp, [&](const QuadNode& q) { out.push_back(q); });
  return out;
}

// ---------------------------------------------------------------------------
// Slices and coefficients

SampledSignal wavelet_slice(const FrequencySignal& f, const AnalyticWindow& psi, const Mat& h,
                            const FrequencyGrid& grid) {
  require_same_dim(f, psi);
  SampledSignal out(grid, Domain::spatial);
  if (f.is_zero() || psi.is_zero()) return out;
  if (!grid.contains(f.support_box())) throw std::domain_error("grid does not contain the support of f_hat");
  const Mat ht = h.transpose();
  const Box region = f.support_box().intersect(psi.support_box(ht.inverse()));
  if (region.empty()) return out;
  const double amp = std::sqrt(std::abs(h.det()));
  const SampledSignal g = sample_frequency(grid, region, [&](const Vec& xi) {
    const double w = psi(ht * xi);
    return w == 0.0 ? cplx(0.0) : amp * f(xi) * w;
  });
  return to_spatial(g);
}

cplx wavelet_coefficient(const FrequencySignal& f, const AnalyticWindow& psi, const Mat& h, const Vec& x, int n) {
  require_same_dim(f, psi);
  if (f.is_zero() || psi.is_zero()) return 0.0;
  const Frame fr = best_frame(f, psi, h, x);
  if (fr.empty) return 0.0;
  const int d = f.dim();
  const Mat ht = h.transpose();
  // Midpoint rule over the frame region with at least n samples per axis.
  int counts[2] = {1, 1};
  double steps[2] = {0.0, 0.0};
  for (int a = 0; a < d; ++a) {
    const double w = fr.region.hi[a] - fr.region.lo[a];
    counts[a] = std::max(n, int(std::ceil(w / fr.step)));
    steps[a] = w / counts[a];
  }
  const Vec y = fr.m.transpose() * x;
  cplx sum = 0.0;
  for (int i = 0; i < counts[0]; ++i) {
    const double e0 = fr.region.lo[0] + (i + 0.5) * steps[0];
    for (int j = 0; j < (d == 2 ? counts[1] : 1); ++j) {
      const Vec eta = d == 1 ? Vec(e0) : Vec(e0, fr.region.lo[1] + (j + 0.5) * steps[1]);
      const Vec zeta = fr.m * eta;
      const double w = psi(ht * zeta);
      if (w == 0.0) continue;
      const cplx fz = f(zeta);
      if (fz == 0.0) continue;
      sum += fz * w * std::polar(1.0, 2.0 * kPi * y.dot(eta));
    }
  }
  const double cell = steps[0] * (d == 2 ? steps[1] : 1.0);
  return std::sqrt(std::abs(h.det())) * std::abs(fr.m.det()) * cell * sum;
}

double slice_norm(const FrequencySignal& f, const AnalyticWindow& psi, const Mat& h, double p, int n) {
  require_same_dim(f, psi);
  if (!(p >= 1.0)) throw std::invalid_argument("p must lie in [1, infinity]");
  if (f.is_zero() || psi.is_zero()) return 0.0;
  const Frame fr = best_frame(f, psi, h, Vec::zero(f.dim()));
  if (fr.empty) return 0.0;
  // Spatial Riemann sums of |.|^p need a fine spatial step, hence a wide frequency box.
  const double margin = p == 2.0 ? 1.25 : 4.0;
  const double half = margin * fr.region.max_half_side();
  const int size = std::max(n, next_pow2(2.0 * half / fr.step));
  if (size > 4096) throw std::domain_error("slice needs more than 4096 samples per axis");
  const SampledSignal g = frame_samples(f, psi, h, fr, size, margin);
  const double jac = std::abs(fr.m.det());
  if (p == 2.0) {
    double s = 0.0;
    for (const auto& v : g.data) s += std::norm(v);
    return std::sqrt(jac * s * g.grid.freq_volume());
  }
  // ||F^{-1} G||_p = |det m|^{1 - 1/p} ||F^{-1}(G o m)||_p.
  const double k = lp_norm(to_spatial(g), p);
  return std::isinf(p) ? jac * k : std::pow(jac, 1.0 - 1.0 / p) * k;
}

std::vector<SliceValue> wavelet_slices(const FrequencySignal& f, const AnalyticWindow& psi, const GroupGrid& grid,
                                       double p, int n) {
  std::vector<SliceValue> out;
  for (const auto& node : grid.nodes_for(f, psi)) out.push_back({node, slice_norm(f, psi, node.h.matrix, p, n)});
  return out;
}

double mixed_norm(const std::vector<SliceValue>& slices, const WeightSpec& v, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("q must lie in [1, infinity]");
  std::vector<NormPiece> pieces;
  pieces.reserve(slices.size());
  for (const auto& s : slices) pieces.push_back({"", v(s.node.h), s.node.weight / s.node.h.det_abs, s.norm});
  return NormReport::aggregate(pieces, q);
}

NormReport coorbit_norm(const FrequencySignal& f, const AnalyticWindow& psi, const GroupGrid& grid,
                        const WeightSpec& v, double p, double q, const CoorbitOptions& opt) {
  require_same_dim(f, psi);
  NormReport r;
  r.p = p;
  r.q = q;
  r.truncation = grid.describe();
  if (f.is_zero() || psi.is_zero()) return r;
  const CellQuadrature& quad = grid.quadrature();
  const Footprint fp = quad.footprint(f.support_box(), psi.support_box());
  std::vector<LatticeIndex> clipped;
  for (const auto& c : quad.cells(fp)) {
    if (grid.contains(c)) continue;
    // A cell is clipped only if one of its nodes actually reaches supp f_hat.
    bool reaches = false;
    quad.visit(c, fp, [&](const QuadNode&) { reaches = true; });
    if (reaches) clipped.push_back(c);
  }
  if (!clipped.empty()) {
    if (!opt.allow_truncation) {
      std::ostringstream os;
      os << "group truncation clips the support set: " << clipped.size() << " cells missing, e.g.";
      for (std::size_t i = 0; i < std::min<std::size_t>(clipped.size(), 4); ++i) os << ' ' << clipped[i];
      throw std::domain_error(os.str());
    }
    r.truncation += ", clipped " + std::to_string(clipped.size()) + " cells";
  }
  for (const auto& s : wavelet_slices(f, psi, grid, p, opt.n)) {
    std::ostringstream label;
    label << s.node.cell << " (" << s.node.h.params.coords[0] << ", " << s.node.h.params.coords[1] << ")";
    r.pieces.push_back({label.str(), v(s.node.h), s.node.weight / s.node.h.det_abs, s.norm});
  }
  r.assemble();
  return r;
}

// ---------------------------------------------------------------------------
// Identity checks

ParsevalReport parseval_check(const FrequencySignal& f, const AnalyticWindow& psi, const WellSpreadFamily& family,
                              const QuadratureSpec& spec, int n) {
  require_same_dim(f, psi);
  if (f.is_zero()) throw std::invalid_argument("Parseval check needs a nonzero signal");
  psi.require_inside_orbit(family.chart());
  const FrequencyGrid grid = FrequencyGrid::enclosing(f.support_box(), n);
  const SampledSignal fs = sample_frequency(grid, f.support_box(), [&](const Vec& xi) { return f(xi); });
  std::vector<double> power(fs.data.size());
  double f2 = 0.0;
  for (std::size_t i = 0; i < power.size(); ++i) {
    power[i] = std::norm(fs.data[i]);
    f2 += power[i];
  }
  const CellQuadrature quad(family, spec);
  const Footprint fp = quad.footprint(f.support_box(), psi.support_box());
  const Box fbox = f.support_box();
  const double step = grid.dxi();
  ParsevalReport r;
  double total = 0.0;
  // ||W(., h)||_2^2 / |det h| = int |f_hat|^2 |psi_hat(h^T xi)|^2 by Plancherel.
  for (const auto& c : quad.cells(fp)) {
    double cell_sum = 0.0;
    quad.visit(c, fp, [&](const QuadNode& node) {
      ++r.nodes;
      const Mat ht = node.h.matrix.transpose();
      const Box region = fbox.intersect(psi.support_box(ht.inverse()));
      if (region.empty()) return;
      const auto [a0, b0] = grid.index_range(0, region.axis(0));
      double s = 0.0;
      if (grid.dim() == 1) {
        for (int m = a0; m <= b0; ++m) {
          const double w = psi(ht * Vec(grid.center()[0] + m * step));
          s += power[std::size_t(grid.array_index(m))] * w * w;
        }
      } else {
        const auto [a1, b1] = grid.index_range(1, region.axis(1));
        for (int m0 = a0; m0 <= b0; ++m0) {
          const double x0 = grid.center()[0] + m0 * step;
          const std::size_t row = std::size_t(grid.array_index(m0)) * std::size_t(grid.n());
          for (int m1 = a1; m1 <= b1; ++m1) {
            const double w = psi(ht * Vec(x0, grid.center()[1] + m1 * step));
            if (w != 0.0) s += power[row + std::size_t(grid.array_index(m1))] * w * w;
          }
        }
      }
      cell_sum += node.weight * s;
    });
    total += cell_sum;
  }
  r.ratio = total / f2;
  r.calderon = calderon_constant(psi, family.chart());
  r.rel_error = std::abs(r.ratio - r.calderon) / r.calderon;
  return r;
}

double cell_integral(const AnalyticWindow& psi, const WellSpreadFamily& family, const LatticeIndex& cell,
                     const Vec& xi) {
  if (psi.is_zero()) return 0.0;
  const GroupChart& chart = family.chart();
  if (!chart.in_orbit(xi)) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  auto value = [&](double u0, double u1) {
    const double w = psi(chart.dual_action(chart.element(family.cell_params(cell, u0, u1)), xi));
    return w * w;
  };
  auto inner = [&](double u0) -> double {
    const double dens = family.cell_density(u0);
    if (chart.kind() == GroupKind::dyadic1d) return dens * value(u0, 0.0);
    // The second coordinate is integrated over the range where the integrand lives.
    const ChartParams p = family.cell_params(cell, u0, 0.0);
    const Interval c1 = chart.preimage_coord1(cell.branch, p.coords[0], Box{xi, xi}, psi.support_box());
    if (c1.empty()) return 0.0;
    Interval u1;
    if (chart.kind() == GroupKind::similitude2d) {
      if (c1.width() >= 2.0 * kPi) return dens * gauss_kronrod<double, 61>::integrate(
          [&](double t) { return value(u0, t); }, 0.0, 1.0, 12, 1e-11);
      // Angles are periodic, so the arc is integrated directly in angle units.
      const double base = p.coords[1];
      return dens * gauss_kronrod<double, 61>::integrate(
                        [&](double a) {
                          const double t = (a - base) / (2.0 * kPi);
                          return value(u0, t - std::floor(t));
                        },
                        c1.lo, c1.hi, 12, 1e-11) /
             (2.0 * kPi);
    }
    const double s = std::exp(0.5 * u0 * kLn2);
    u1 = {std::max(0.0, c1.lo * s - cell.shear), std::min(1.0, c1.hi * s - cell.shear)};
    if (u1.empty()) return 0.0;
    return dens * gauss_kronrod<double, 61>::integrate([&](double t) { return value(u0, t); }, u1.lo, u1.hi, 12,
                                                       1e-11);
  };
  return gauss_kronrod<double, 61>::integrate(inner, 0.0, 1.0, 15, 1e-11);
}

std::vector<LocalizationReport> localization_convergence(const FrequencySignal& f, const AnalyticWindow& psi,
                                                         const WellSpreadFamily& family, const LatticeIndex& cell,
                                                         const std::vector<QuadratureSpec>& specs,
                                                         const FrequencyGrid& grid) {
  require_same_dim(f, psi);
  if (!grid.contains(f.support_box())) throw std::domain_error("grid does not contain the support of f_hat");
  // Left side, shared by every level.
  SampledSignal lhs_hat(grid, Domain::frequency);
  if (!f.is_zero() && !psi.is_zero())
    lhs_hat = sample_frequency(grid, f.support_box(), [&](const Vec& xi) {
      const cplx v = f(xi);
      return v == 0.0 ? cplx(0.0) : v * cell_integral(psi, family, cell, xi);
    });
  const SampledSignal lhs = to_spatial(lhs_hat);

  std::vector<LocalizationReport> out;
  for (const auto& spec : specs) {
    LocalizationReport r;
    // Right side: each node's slice is convolved with psi(h^{-1} .) through the FFT.
    SampledSignal acc(grid, Domain::frequency);
    if (!f.is_zero() && !psi.is_zero()) {
      const CellQuadrature quad(family, spec);
      const Footprint fp = quad.footprint(f.support_box(), psi.support_box());
      quad.visit(cell, fp, [&](const QuadNode& node) {
        ++r.nodes;
        const Mat& h = node.h.matrix;
        const Mat ht = h.transpose();
        const SampledSignal slice = wavelet_slice(f, psi, h, grid);
        const SampledSignal slice_hat = to_frequency(slice);
        const double scale = node.weight * std::pow(node.h.det_abs, -1.5) * node.h.det_abs;
        const Box region = psi.support_box(ht.inverse());
        const SampledSignal kernel = sample_frequency(grid, region, [&](const Vec& xi) { return cplx(psi(ht * xi)); });
        for (std::size_t i = 0; i < acc.data.size(); ++i)
          if (kernel.data[i] != 0.0) acc.data[i] += scale * slice_hat.data[i] * kernel.data[i];
      });
    }
    const SampledSignal rhs = to_spatial(acc);
    for (std::size_t i = 0; i < lhs.data.size(); ++i) {
      r.max_deviation = std::max(r.max_deviation, std::abs(lhs.data[i] - rhs.data[i]));
      r.max_value = std::max(r.max_value, std::abs(lhs.data[i]));
    }
    out.push_back(r);
  }
  return out;
}

LocalizationReport localization_identity_check(const FrequencySignal& f, const AnalyticWindow& psi,
                                               const WellSpreadFamily& family, const LatticeIndex& cell,
                                               const QuadratureSpec& spec, const FrequencyGrid& grid) {
  return localization_convergence(f, psi, family, cell, {spec}, grid).front();
}

CovarianceValue conjugation_covariance_check(const FrequencySignal& f, const AnalyticWindow& psi1, const Mat& g,
                                             const Mat& h, const Vec& x, int n) {
  const Mat gi = g.inverse();
  CovarianceValue r;
  r.lhs = wavelet_coefficient(f.dilated(g), psi1, h, x, n);
  r.rhs = wavelet_coefficient(f, psi1.dilated(gi), gi * h * g, gi * x, n);
  r.deviation = std::abs(r.lhs - r.rhs);
  return r;
}

double NormReport::aggregate(const std::vector<NormPiece>& pieces, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (const auto& p : pieces)
      if (p.measure > 0.0) m = std::max(m, p.weight * p.local);
    return m;
  }
  double s = 0.0;
  for (const auto& p : pieces) s += p.measure * std::pow(p.weight * p.local, q);
  return std::pow(s, 1.0 / q);
}

}  // namespace orbitlets
