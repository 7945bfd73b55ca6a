#include "orbitlets/bapu.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace orbitlets {

namespace {

bool degenerate(const Box& b) {
  for (int i = 0; i < b.dim(); ++i)
    if (b.lo[i] != b.hi[i]) return false;
  return true;
}

double orbit_density(const GroupChart& chart, const Vec& eta) {
  switch (chart.kind()) {
    case GroupKind::dyadic1d: return 1.0 / std::abs(eta[0]);
    case GroupKind::similitude2d: return 1.0 / eta.dot(eta);
    case GroupKind::shearlet2d: return 1.0 / (eta[0] * eta[0]);
  }
  return 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// Cell quadrature

CellQuadrature::CellQuadrature(WellSpreadFamily family, QuadratureSpec spec)
    : family_(std::move(family)), spec_(spec) {
  if (spec.nodes0 < 1 || spec.nodes1 < 1) throw std::invalid_argument("quadrature needs at least one node per axis");
}

int CellQuadrature::nodes_per_cell() const {
  return family_.chart().kind() == GroupKind::dyadic1d ? spec_.nodes0 : spec_.nodes0 * spec_.nodes1;
}

Footprint CellQuadrature::footprint(const Box& xi, const Box& eta) const {
  Footprint fp{xi, eta, {}};
  const GroupChart& chart = family_.chart();
  if (chart.blind_spot_distance(eta) <= 0.0) throw std::domain_error("window support meets the blind spot");
  if (degenerate(xi) && !chart.in_orbit(xi.lo)) return fp;
  fp.params = chart.preimage(xi, eta);
  return fp;
}

std::vector<LatticeIndex> CellQuadrature::cells(const Footprint& fp) const {
  std::vector<LatticeIndex> out;
  for (const auto& pb : fp.params) {
    auto c = family_.cells_meeting(pb);
    out.insert(out.end(), c.begin(), c.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

QuadNode CellQuadrature::node(const LatticeIndex& cell, int m, int n) const {
  const bool one_d = family_.chart().kind() == GroupKind::dyadic1d;
  const double u0 = (m + 0.5) / spec_.nodes0;
  const double u1 = one_d ? 0.0 : (n + 0.5) / spec_.nodes1;
  QuadNode q;
  q.h = family_.chart().element(family_.cell_params(cell, u0, u1));
  q.weight = family_.cell_density(u0) / nodes_per_cell();
  q.cell = cell;
  return q;
}

void CellQuadrature::visit_all(const LatticeIndex& cell, const std::function<void(const QuadNode&)>& f) const {
  const int n1 = family_.chart().kind() == GroupKind::dyadic1d ? 1 : spec_.nodes1;
  for (int m = 0; m < spec_.nodes0; ++m)
    for (int n = 0; n < n1; ++n) f(node(cell, m, n));
}

void CellQuadrature::visit(const LatticeIndex& cell, const Footprint& fp,
                           const std::function<void(const QuadNode&)>& f) const {
  const GroupChart& chart = family_.chart();
  const int N0 = spec_.nodes0, N1 = spec_.nodes1;
  auto clip_range = [](double lo, double hi, int count) {
    const int a = std::max(0, int(std::ceil(lo * count - 0.5)));
    const int b = std::min(count - 1, int(std::floor(hi * count - 0.5)));
    return std::make_pair(a, b);
  };
  for (const auto& pb : fp.params) {
    const int branch = chart.kind() == GroupKind::similitude2d ? 1 : pb.branch;
    if (branch != cell.branch) continue;
    Interval u0;
    if (chart.kind() == GroupKind::shearlet2d)
      u0 = {pb.c0.lo / kLn2 - cell.scale, pb.c0.hi / kLn2 - cell.scale};
    else
      u0 = {pb.c0.lo / kLn2 + cell.scale, pb.c0.hi / kLn2 + cell.scale};
    const auto [m_lo, m_hi] = clip_range(u0.lo, u0.hi, N0);
    for (int m = m_lo; m <= m_hi; ++m) {
      switch (chart.kind()) {
        case GroupKind::dyadic1d:
          f(node(cell, m, 0));
          break;
        case GroupKind::similitude2d: {
          if (pb.c1.width() >= 2.0 * kPi) {
            for (int n = 0; n < N1; ++n) f(node(cell, m, n));
            break;
          }
          const int a = int(std::ceil(pb.c1.lo / (2.0 * kPi) * N1 - 0.5));
          const int b = int(std::floor(pb.c1.hi / (2.0 * kPi) * N1 - 0.5));
          for (int n = a; n <= b && n - a < N1; ++n) f(node(cell, m, ((n % N1) + N1) % N1));
          break;
        }
        case GroupKind::shearlet2d: {
          const double tau = (m + 0.5) / N0 * kLn2;
          const Interval beta = chart.preimage_coord1(cell.branch, cell.scale * kLn2 + tau, fp.xi, fp.eta);
          if (beta.empty()) break;
          const double s = std::exp(0.5 * tau);
          const auto [n_lo, n_hi] = clip_range(beta.lo * s - cell.shear, beta.hi * s - cell.shear, N1);
          for (int n = n_lo; n <= n_hi; ++n) f(node(cell, m, n));
          break;
        }
      }
    }
  }
}

std::vector<QuadNode> CellQuadrature::collect(const Footprint& fp) const {
  std::vector<QuadNode> out;
  for (const auto& c : cells(fp)) visit(c, fp, [&](const QuadNode& q) { out.push_back(q); });
  return out;
}

// ---------------------------------------------------------------------------
// Calderon constant

double calderon_integral(const AnalyticWindow& psi, const CellQuadrature& quad, const Vec& xi) {
  if (psi.is_zero()) return 0.0;
  const GroupChart& chart = quad.family().chart();
  const Footprint fp = quad.footprint(Box{xi, xi}, psi.support_box());
  // Per-cell partial sums, added in sorted cell order.
  double total = 0.0;
  for (const auto& c : quad.cells(fp)) {
    double cell_sum = 0.0;
    quad.visit(c, fp, [&](const QuadNode& q) {
      const double v = psi(chart.dual_action(q.h, xi));
      cell_sum += q.weight * v * v;
    });
    total += cell_sum;
  }
  return total;
}

double calderon_constant(const AnalyticWindow& psi, const GroupChart& chart, int samples_per_axis) {
  if (psi.is_zero()) return 0.0;
  psi.require_inside_orbit(chart);
  const Box b = psi.support_box();
  const int n = samples_per_axis;
  if (chart.dim() == 1) {
    const double h = (b.hi[0] - b.lo[0]) / n;
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      const Vec eta(b.lo[0] + (k + 0.5) * h);
      const double v = psi(eta);
      s += v * v * orbit_density(chart, eta);
    }
    return s * h;
  }
  const double h0 = (b.hi[0] - b.lo[0]) / n, h1 = (b.hi[1] - b.lo[1]) / n;
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    double row = 0.0;
    for (int l = 0; l < n; ++l) {
      const Vec eta(b.lo[0] + (k + 0.5) * h0, b.lo[1] + (l + 0.5) * h1);
      const double v = psi(eta);
      if (v != 0.0) row += v * v * orbit_density(chart, eta);
    }
    s += row;
  }
  return s * h0 * h1;
}

CalderonReport calderon(const AnalyticWindow& psi, const WellSpreadFamily& family, const QuadratureSpec& spec,
                        const std::vector<Vec>& probes, const std::optional<IndexWindow>& allowed) {
  CalderonReport r;
  const CellQuadrature quad(family, spec);
  r.constant = calderon_constant(psi, family.chart());
  for (const auto& xi : probes) {
    if (allowed && !psi.is_zero()) {
      const Footprint fp = quad.footprint(Box{xi, xi}, psi.support_box());
      for (const auto& c : quad.cells(fp)) {
        const bool inside = c.scale >= allowed->scale_lo && c.scale <= allowed->scale_hi &&
                            std::abs(c.shear) <= allowed->shear_radius;
        if (!inside) {
          std::ostringstream os;
          os << "truncated parameter domain clips the integrand at " << xi << ": cell " << c
             << " lies outside the allowed window";
          throw std::domain_error(os.str());
        }
      }
    }
    r.values.push_back(calderon_integral(psi, quad, xi));
  }
  for (double v : r.values) {
    const double dev = r.constant > 0.0 ? std::abs(v - r.constant) / r.constant : std::abs(v);
    r.max_rel_deviation = std::max(r.max_rel_deviation, dev);
  }
  return r;
}

// ---------------------------------------------------------------------------
// BAPU

BaseSet bapu_base_set(const AnalyticWindow& psi, const WellSpreadFamily& family) {
  const Box b = psi.support_box();
  switch (family.chart().kind()) {
    case GroupKind::dyadic1d: {
      // U^{-T} eta = eta / alpha, alpha in [1, 2).
      const Interval img = b.axis(0) * Interval{0.5, 1.0};
      return BaseSet::interval(img.lo, img.hi);
    }
    case GroupKind::similitude2d: {
      const Vec c = psi.center();
      const auto sv = psi.shape().inverse().singular_values();
      const double lo = std::max(0.0, c.norm() - sv[0]);
      return BaseSet::annulus(0.5 * std::max(lo, b.min_norm()), std::min(c.norm() + sv[0], b.max_norm()));
    }
    case GroupKind::shearlet2d: {
      // xi1 = eta1 / alpha, xi2 = (eta2 - t eta1) / sqrt(alpha), t in [0, 1], alpha in [1, 2).
      const Interval x = b.axis(0) * Interval{0.5, 1.0};
      const Interval y = (b.axis(1) - b.axis(0) * Interval{0.0, 1.0}) * Interval{std::sqrt(0.5), 1.0};
      return BaseSet::box(Vec(x.lo, y.lo), Vec(x.hi, y.hi));
    }
  }
  throw std::logic_error("unknown chart");
}

Bapu::Bapu(AnalyticWindow psi, WellSpreadFamily family, QuadratureSpec spec, std::optional<double> C)
    : psi_(std::move(psi)), quad_(family, spec), q_(BaseSet::interval(0.0, 1.0)) {
  psi_.require_inside_orbit(family.chart());
  if (psi_.is_zero()) throw std::invalid_argument("a partition of unity needs a nonzero window");
  C_ = C ? *C : calderon_constant(psi_, family.chart());
  if (!(C_ > 0.0)) throw std::domain_error("Calderon constant must be positive");
  q_ = bapu_base_set(psi_, family);
}

double Bapu::phi(const LatticeIndex& i, const Vec& xi) const {
  const Footprint fp = quad_.footprint(Box{xi, xi}, psi_.support_box());
  double s = 0.0;
  const GroupChart& chart = family().chart();
  quad_.visit(i, fp, [&](const QuadNode& q) {
    const double v = psi_(chart.dual_action(q.h, xi));
    s += q.weight * v * v;
  });
  return s / C_;
}

std::vector<std::pair<LatticeIndex, double>> Bapu::phis(const Vec& xi) const {
  std::vector<std::pair<LatticeIndex, double>> out;
  const Footprint fp = quad_.footprint(Box{xi, xi}, psi_.support_box());
  const GroupChart& chart = family().chart();
  for (const auto& c : quad_.cells(fp)) {
    double s = 0.0;
    quad_.visit(c, fp, [&](const QuadNode& q) {
      const double v = psi_(chart.dual_action(q.h, xi));
      s += q.weight * v * v;
    });
    if (s > 0.0) out.emplace_back(c, s / C_);
  }
  return out;
}

double Bapu::sum(const Vec& xi) const {
  double s = 0.0;
  for (const auto& [i, v] : phis(xi)) s += v;
  return s;
}

std::vector<LatticeIndex> Bapu::indices_meeting(const Box& region) const {
  return quad_.cells(quad_.footprint(region, psi_.support_box()));
}

Box Bapu::support_box(const LatticeIndex& i) const {
  const GroupPoint h = family().point(i);
  return image(h.matrix.transpose().inverse(), q_.bounding_box());
}

CArray Bapu::sample(const LatticeIndex& i, const FrequencyGrid& grid, const Box* clip, const Mat* frame) const {
  if (grid.dim() != family().chart().dim()) throw std::invalid_argument("grid dimension does not match the chart");
  CArray out(grid.size(), cplx(0.0));
  const GroupChart& chart = family().chart();
  const double step = grid.dxi();
  quad_.visit_all(i, [&](const QuadNode& q) {
    const Mat ht = frame ? q.h.matrix.transpose() * *frame : q.h.matrix.transpose();
    Box region = psi_.support_box(ht.inverse());
    if (clip) {
      region = region.intersect(*clip);
      if (region.empty()) return;
    }
    const auto [a0, b0] = grid.index_range(0, region.axis(0));
    const double w = q.weight / C_;
    if (grid.dim() == 1) {
      const double f = frame ? (*frame)(0, 0) : 1.0;
      for (int m = a0; m <= b0; ++m) {
        const double v = psi_(chart.dual_action(q.h, Vec(f * (grid.center()[0] + m * step))));
        out[std::size_t(grid.array_index(m))] += w * v * v;
      }
      return;
    }
    const auto [a1, b1] = grid.index_range(1, region.axis(1));
    for (int m0 = a0; m0 <= b0; ++m0) {
      const double x0 = grid.center()[0] + m0 * step;
      const std::size_t row = std::size_t(grid.array_index(m0)) * std::size_t(grid.n());
      for (int m1 = a1; m1 <= b1; ++m1) {
        const double v = psi_(ht * Vec(x0, grid.center()[1] + m1 * step));
        if (v != 0.0) out[row + std::size_t(grid.array_index(m1))] += w * v * v;
      }
    }
  });
  return out;
}

L1Bound bapu_l1_norm(const Bapu& bapu, const LatticeIndex& i, int n, double margin) {
  auto resolved = [&](const Box& supp, const FrequencyGrid& grid) {
    double min_side = kInf;
    for (int a = 0; a < supp.dim(); ++a) min_side = std::min(min_side, supp.hi[a] - supp.lo[a]);
    return min_side >= 16.0 * grid.dxi();
  };
  const Box supp = bapu.support_box(i);
  SampledSignal phi(FrequencyGrid::centered_on(supp, n, margin), Domain::frequency);
  if (resolved(supp, phi.grid)) {
    phi.data = bapu.sample(i, phi.grid);
  } else {
    // Elongated supports: sample eta -> phi_i(h_i^{-T} eta), whose support is the fixed
    // base box. The L^1 norm of the inverse transform is unchanged by the linear map.
    const Box base = bapu.base_set().bounding_box();
    phi = SampledSignal(FrequencyGrid::centered_on(base, n, margin), Domain::frequency);
    if (!resolved(base, phi.grid)) {
      std::ostringstream os;
      os << "grid of size " << n << " does not resolve the support of phi" << i;
      throw std::domain_error(os.str());
    }
    const Mat frame = bapu.family().point(i).matrix.transpose().inverse();
    phi.data = bapu.sample(i, phi.grid, nullptr, &frame);
  }
  L1Bound r;
  r.norm = lp_norm(to_spatial(phi), 1.0);

  const AnalyticWindow& psi = bapu.window();
  const FrequencyGrid g2 = FrequencyGrid::centered_on(psi.support_box(), n, margin);
  const SampledSignal sq = sample_frequency(g2, psi.support_box(), [&](const Vec& xi) {
    const double v = psi(xi);
    return cplx(v * v);
  });
  r.gamma_l1 = lp_norm(to_spatial(sq), 1.0);
  r.bound = bapu.family().cell_measure() * r.gamma_l1 / bapu.C();
  return r;
}

}  // namespace orbitlets
