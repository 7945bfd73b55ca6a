#include "orbitlets/weights.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace orbitlets {

double WeightSpec::operator()(const Mat& h) const {
  double v = std::pow(std::abs(h.det()), s);
  if (t1 != 0.0) v *= std::pow(h.spectral_norm(), t1);
  if (t2 != 0.0) v *= std::pow(h.inverse().spectral_norm(), t2);
  return v;
}

double WeightSpec::majorant(const Mat& h) const {
  const double m = std::max(h.spectral_norm(), h.inverse().spectral_norm());
  return std::pow(std::abs(h.det()), s) * std::pow(m, std::abs(t1) + std::abs(t2));
}

WeightSpec vprime(const WeightSpec& v, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("q must lie in [1, infinity]");
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  return {inv_q - 0.5 - v.s, v.t2, v.t1};
}

double transplant(const WeightSpec& v, const GroupChart& chart, const Vec& xi) {
  return v(chart.cross_section(xi));
}

double control_weight(const WeightSpec& v0, const GroupChart& chart, const GroupPoint& h) {
  const GroupPoint hi = chart.inverse(h);
  const double at_one = v0.majorant(Mat::identity(chart.dim()));
  const double v_plus = std::max(v0.majorant(h.matrix), v0.majorant(hi.matrix));
  const double det_plus = std::max(h.det_abs, 1.0 / h.det_abs);
  const double delta_plus = std::max(chart.modular_H(h), chart.modular_H(hi));
  return at_one * v_plus * det_plus * delta_plus;
}

double DiscretizedWeight::at(const LatticeIndex& i) const {
  const auto it = u.find(i);
  if (it == u.end()) throw std::out_of_range("no weight for index " + to_string(i));
  return it->second;
}

double DiscretizedWeight::moderateness(const Covering& c) const {
  const ClusterTable t = clusters(c);
  double worst = 1.0;
  for (std::size_t m = 0; m < t.neighbors.size(); ++m)
    for (int n : t.neighbors[m])
      worst = std::max(worst, at(c.members()[m].index) / at(c.members()[std::size_t(n)].index));
  return worst;
}

DiscretizedWeight discretize_at(const WeightSpec& v, double q, const InducedCovering& cover, const Vec& ref) {
  if (!cover.base().contains(ref)) {
    std::ostringstream os;
    os << "reference point " << ref << " is not in the base set " << cover.base().describe();
    throw std::domain_error(os.str());
  }
  const WeightSpec vp = vprime(v, q);
  const GroupChart& chart = cover.family().chart();
  DiscretizedWeight out;
  for (const auto& m : cover.covering().members()) {
    const Vec xi = m.t * ref;
    out.u[m.index] = transplant(vp, chart, xi);
    std::ostringstream os;
    os << "transplant at " << xi;
    out.provenance[m.index] = os.str();
  }
  return out;
}

DiscretizedWeight discretize(const WeightSpec& v, double q, const InducedCovering& cover) {
  return discretize_at(v, q, cover, cover.family().chart().base_point());
}

DiscretizedWeight declared_weights(const std::map<LatticeIndex, double>& u, const std::string& origin) {
  DiscretizedWeight out;
  for (const auto& [i, w] : u) {
    if (!(w > 0.0)) throw std::invalid_argument("weights must be positive");
    out.u[i] = w;
    out.provenance[i] = origin;
  }
  return out;
}

}  // namespace orbitlets
