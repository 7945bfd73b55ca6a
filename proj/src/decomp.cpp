#include "orbitlets/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace orbitlets {

double BapuPartition::feature(const LatticeIndex& i) const {
  return bapu_.window().feature_scale(bapu_.family().point(i).matrix.transpose());
}

TranslatePartition::TranslatePartition(int first, int last) : first_(first), last_(last) {
  if (last < first) throw std::invalid_argument("empty translate range");
}

double TranslatePartition::theta(double x) {
  return smooth_step(2.0 * (x + 0.75)) * smooth_step(2.0 * (0.75 - x));
}

std::vector<LatticeIndex> TranslatePartition::indices_meeting(const Box& region) const {
  std::vector<LatticeIndex> out;
  const int lo = std::max(first_, int(std::floor(region.lo[0] - 0.75)));
  const int hi = std::min(last_, int(std::ceil(region.hi[0] + 0.75)));
  for (int i = lo; i <= hi; ++i)
    if (region.lo[0] < i + 0.75 && region.hi[0] > i - 0.75) out.push_back({i, 0, 1});
  return out;
}

Box TranslatePartition::support_box(const LatticeIndex& i) const {
  return Box{Vec(i.scale - 0.75), Vec(i.scale + 0.75)};
}

CArray TranslatePartition::sample(const LatticeIndex& i, const FrequencyGrid& grid, const Box* clip) const {
  if (grid.dim() != 1) throw std::invalid_argument("translate partition lives on the line");
  CArray out(grid.size(), cplx(0.0));
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Vec xi = grid.freq_point(k);
    if (!clip || clip->contains(xi)) out[k] = theta(xi[0] - i.scale);
  }
  return out;
}

SampledSignal localize(const SampledSignal& f_hat, const CArray& phi) {
  if (f_hat.domain != Domain::frequency) throw std::invalid_argument("localize expects frequency samples");
  if (phi.size() != f_hat.data.size()) throw std::invalid_argument("window samples do not match the grid");
  SampledSignal prod(f_hat.grid, Domain::frequency);
  for (std::size_t k = 0; k < phi.size(); ++k) prod.data[k] = f_hat.data[k] * phi[k];
  return to_spatial(prod);
}

namespace {

std::vector<LatticeIndex> required_indices(const FrequencySignal& f, const Partition& phi,
                                           const DiscretizedWeight& u) {
  if (f.dim() != phi.dim()) throw std::invalid_argument("signal and partition differ in dimension");
  std::vector<LatticeIndex> need = f.is_zero() ? std::vector<LatticeIndex>{} : phi.indices_meeting(f.support_box());
  std::vector<LatticeIndex> missing;
  for (const auto& i : need)
    if (!u.u.count(i)) missing.push_back(i);
  if (!missing.empty()) {
    std::ostringstream os;
    os << "index window too small: " << missing.size() << " indices meeting supp f_hat carry no weight:";
    for (std::size_t k = 0; k < std::min<std::size_t>(missing.size(), 8); ++k) os << ' ' << missing[k];
    if (missing.size() > 8) os << " ...";
    throw std::domain_error(os.str());
  }
  return need;
}

constexpr int kMaxSide = 4096;

int grid_size(const Box& region, double feature, double reach, double margin, int n) {
  const double step = std::min(feature / 8.0, 1.0 / (2.0 * (reach + 12.0 / feature)));
  const double want = 2.0 * margin * region.max_half_side() / step;
  return want > double(kMaxSide) ? kMaxSide + 1 : std::max(n, next_pow2(want));
}

double piece_norm(const SampledSignal& fs, const CArray& w, const FrequencyGrid& grid, double p) {
  if (p != 2.0) return lp_norm(localize(fs, w), p);
  double s = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) s += std::norm(fs.data[k] * w[k]);
  return std::sqrt(s * grid.freq_volume());
}

// ||F^{-1}(phi_i f_hat)||_p through eta = m^T xi: with G(eta) = (phi_i f_hat)(m^{-T} eta),
// F^{-1}G(x) = |det m| F^{-1}(phi_i f_hat)(m x).
double framed_piece(const FrequencySignal& f, const Partition& phi, const LatticeIndex& i, const Partition::Frame& fr,
                    const Box& region, double p, double margin, int n) {
  const int d = f.dim();
  const Mat mt = fr.m.transpose();
  const Mat back = mt.inverse();
  const Box eta = fr.box.intersect(image(mt, region));
  if (eta.empty()) return 0.0;
  double feature = fr.feature;
  double reach = 0.0;
  const Mat minv = fr.m.inverse();
  for (const auto& t : f.terms()) {
    if (t.window.is_zero() || t.coefficient == 0.0) continue;
    feature = std::min(feature, t.window.feature_scale(back));
    if (t.shift.dim() == d) reach = std::max(reach, (minv * t.shift).norm());
  }
  const int size = grid_size(eta, feature, reach, margin, n);
  if (size > kMaxSide) throw std::domain_error("piece " + to_string(i) + " needs more than 4096 samples per axis");
  const FrequencyGrid grid = FrequencyGrid::centered_on(eta, size, margin);
  const SampledSignal gs = sample_frequency(grid, eta, [&](const Vec& e) {
    const Vec xi = back * e;
    const double w = phi.value(i, xi);
    return w == 0.0 ? cplx(0.0) : w * f(xi);
  });
  const CArray ones(gs.data.size(), cplx(1.0));
  const double det = std::abs(fr.m.det());
  return std::pow(det, 1.0 / p - 1.0) * piece_norm(gs, ones, grid, p);
}

NormReport start_report(double p, double q) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw std::invalid_argument("p and q must lie in [1, infinity]");
  NormReport r;
  r.p = p;
  r.q = q;
  return r;
}

}  // namespace

NormReport decomp_norm(const FrequencySignal& f, const Partition& phi, const DiscretizedWeight& u, double p, double q,
                       const DecompOptions& opt) {
  NormReport r = start_report(p, q);
  const auto indices = required_indices(f, phi, u);
  r.truncation = std::to_string(indices.size()) + " indices meet supp f_hat";
  const int d = f.dim();
  for (const auto& i : indices) {
    NormPiece piece{to_string(i), u.at(i), 1.0, 0.0};
    const Box region = phi.support_box(i).intersect(f.support_box());
    if (!region.empty()) {
      double feature = phi.feature(i), reach = 0.0;
      for (const auto& t : f.terms()) {
        if (t.window.is_zero() || t.coefficient == 0.0) continue;
        feature = std::min(feature, t.window.feature_scale(Mat::identity(d)));
        if (t.shift.dim() == d) reach = std::max(reach, t.shift.norm());
      }
      const double margin = p == 2.0 ? 1.25 : opt.margin;
      const int size = grid_size(region, feature, reach, margin, opt.n);
      const auto fr = phi.frame(i);
      if (size <= kMaxSide && !(opt.prefer_frame && fr)) {
        const FrequencyGrid grid = FrequencyGrid::centered_on(region, size, margin);
        const SampledSignal fs = sample_frequency(grid, region, [&](const Vec& xi) { return f(xi); });
        piece.local = piece_norm(fs, phi.sample(i, grid, &region), grid, p);
      } else if (fr) {
        piece.local = framed_piece(f, phi, i, *fr, region, p, margin, opt.n);
      } else {
        throw std::domain_error("piece " + to_string(i) + " needs more than 4096 samples per axis");
      }
    }
    r.pieces.push_back(piece);
  }
  r.assemble();
  return r;
}

NormReport decomp_norm_on_grid(const FrequencySignal& f, const Partition& phi, const DiscretizedWeight& u, double p,
                               double q, const FrequencyGrid& grid) {
  NormReport r = start_report(p, q);
  const auto indices = required_indices(f, phi, u);
  if (!f.is_zero() && !grid.contains(f.support_box())) throw std::domain_error("grid does not contain supp f_hat");
  r.truncation = std::to_string(indices.size()) + " indices meet supp f_hat";
  const SampledSignal fs =
      f.is_zero() ? SampledSignal(grid, Domain::frequency)
                  : sample_frequency(grid, f.support_box(), [&](const Vec& xi) { return f(xi); });
  for (const auto& i : indices)
    r.pieces.push_back({to_string(i), u.at(i), 1.0, lp_norm(localize(fs, phi.sample(i, grid)), p)});
  r.assemble();
  return r;
}

AnalyticWindow cauchy_bump() { return AnalyticWindow::bump(Vec(0.0), 0.2); }

FrequencySignal cauchy_partial_sum(int n) {
  FrequencySignal f(1);
  for (int j = 1; j <= n; ++j) f.add(std::pow(4.0, j), AnalyticWindow::bump(Vec(double(j)), 0.2));
  return f;
}

CauchyResult cauchy_example(int n, int m, const FrequencyGrid& grid) {
  if (m < 1 || n < m) throw std::invalid_argument("Cauchy example needs n >= m >= 1");
  if (grid.dim() != 1) throw std::invalid_argument("Cauchy example lives on the line");
  if (!grid.contains(Box{Vec(-0.75), Vec(n + 0.75)}))
    throw std::domain_error("grid of extent " + std::to_string(grid.extent()) + " cannot hold translates up to " +
                            std::to_string(n));
  CauchyResult r;
  const FrequencySignal diff = cauchy_partial_sum(n) - cauchy_partial_sum(m);
  const TranslatePartition theta(0, n + 1);
  std::map<LatticeIndex, double> weights;
  for (int i = 0; i <= n + 1; ++i) weights[{i, 0, 1}] = std::pow(10.0, -i);
  const DiscretizedWeight u = declared_weights(weights, "u_i = 10^{-i}");
  if (n > m) r.norm = decomp_norm_on_grid(diff, theta, u, 1.0, 1.0, grid).value;

  const AnalyticWindow psi = cauchy_bump();
  const SampledSignal ps = sample_frequency(grid, psi.support_box(), [&](const Vec& xi) { return cplx(psi(xi)); });
  const double base = lp_norm(to_spatial(ps), 1.0);
  for (int i = m + 1; i <= n; ++i) r.closed_form += base * std::pow(0.4, i);
  r.rel_err = r.closed_form > 0.0 ? std::abs(r.norm - r.closed_form) / r.closed_form : std::abs(r.norm);
  return r;
}

}  // namespace orbitlets
