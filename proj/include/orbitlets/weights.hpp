#pragma once

#include <map>
#include <string>
#include <vector>

#include "orbitlets/covering.hpp"
#include "orbitlets/group.hpp"

namespace orbitlets {

/// v(h) = |det h|^s * ||h||^t1 * ||h^{-1}||^t2 with spectral norms.
struct WeightSpec {
  double s = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;

  double operator()(const Mat& h) const;
  double operator()(const GroupPoint& h) const { return (*this)(h.matrix); }
  bool operator==(const WeightSpec&) const = default;

  static WeightSpec det_power(double s) { return {s, 0.0, 0.0}; }
  /// Submultiplicative majorant |det|^s * max(||h||, ||h^{-1}||)^{|t1| + |t2|}; v is moderate with respect to it.
  double majorant(const Mat& h) const;
};

/// Reflection v'(h) = |det h^{-1}|^{1/2 - 1/q} v(h^{-1}); q = infinity is allowed.
WeightSpec vprime(const WeightSpec& v, double q);

/// Orbit weight u(xi) = v(h_xi) with the chart's cross-section.
double transplant(const WeightSpec& v, const GroupChart& chart, const Vec& xi);

/// Control weight w(h) = v0(1) * v0^+(h) * |det|^+(h) * Delta_H^+(h), f^+(h) = max(f(h), f(h^{-1})).
double control_weight(const WeightSpec& v0, const GroupChart& chart, const GroupPoint& h);

struct DiscretizedWeight {
  std::map<LatticeIndex, double> u;
  std::map<LatticeIndex, std::string> provenance;

  double at(const LatticeIndex& i) const;
  /// Largest u_i / u_j over cluster pairs of the covering.
  double moderateness(const Covering& c) const;
};

/// u_i = u(h_i^{-T} xi0) with u the transplant of v' (equivalently v'(h_i^{-1})).
/// Rejects base sets that do not contain the chart's base point.
DiscretizedWeight discretize(const WeightSpec& v, double q, const InducedCovering& cover);
/// Same construction with another reference point of Q in place of xi0.
DiscretizedWeight discretize_at(const WeightSpec& v, double q, const InducedCovering& cover, const Vec& ref);
/// Per-index weights given directly.
DiscretizedWeight declared_weights(const std::map<LatticeIndex, double>& u, const std::string& origin);

}  // namespace orbitlets
