#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "orbitlets/linalg.hpp"

namespace orbitlets {

enum class GroupKind { dyadic1d, similitude2d, shearlet2d };

GroupKind parse_group_kind(std::string_view name);
std::string_view to_string(GroupKind kind);

/// Chart coordinates of a group element.
///
/// Coordinates are chosen so that left Haar measure has constant density one:
///   dyadic1d      branch = sign(a), coords = (ln|a|)                 da/|a|
///   similitude2d  branch = 1,       coords = (ln r, angle)          dr dangle / r
///   shearlet2d    branch = eps,     coords = (ln a, b/a)            db da / a^2
/// where the shearlet element is eps * [[a, b], [0, sqrt(a)]] and the similitude
/// element is r * [[cos, sin], [-sin, cos]].
struct ChartParams {
  int branch = 1;
  std::array<double, 2> coords{};
};

struct GroupPoint {
  Mat matrix;
  ChartParams params;
  double det_abs = 1.0;
};

/// Region of chart coordinates for one branch. For similitude2d the angle interval
/// is not reduced modulo 2 pi.
struct ParamBox {
  int branch = 1;
  Interval c0;
  Interval c1;
};

class GroupChart {
 public:
  explicit GroupChart(GroupKind kind);

  GroupKind kind() const { return kind_; }
  int dim() const { return kind_ == GroupKind::dyadic1d ? 1 : 2; }
  int param_dim() const { return kind_ == GroupKind::dyadic1d ? 1 : 2; }
  Vec base_point() const { return dim() == 1 ? Vec(1.0) : Vec(1.0, 0.0); }
  /// Discrete branch labels; similitude2d is connected and has the single label 1.
  std::vector<int> branches() const;

  GroupPoint element(const ChartParams& p) const;
  GroupPoint identity() const;
  /// Inverse of element(): recovers chart coordinates from a matrix of the group.
  ChartParams params_of(const Mat& m) const;
  GroupPoint from_matrix(const Mat& m) const;
  GroupPoint multiply(const GroupPoint& a, const GroupPoint& b) const;
  GroupPoint inverse(const GroupPoint& a) const;

  // Natural parametrizations.
  GroupPoint dyadic(double a) const;
  GroupPoint similitude(double r, double angle) const;
  GroupPoint shearlet(int eps, double a, double b) const;

  /// h^T xi.
  Vec dual_action(const GroupPoint& h, const Vec& xi) const { return h.matrix.transpose() * xi; }

  bool in_orbit(const Vec& xi) const;
  /// Euclidean distance from xi to the blind spot (complement of the dual orbit).
  double blind_spot_distance(const Vec& xi) const;
  /// Smallest blind-spot distance over a box (zero if the box meets the blind spot).
  double blind_spot_distance(const Box& box) const;

  double modular_H(const GroupPoint& h) const;
  double modular_G(const GroupPoint& h) const { return modular_H(h) / h.det_abs; }

  /// Group element with h^T xi0 = xi. Throws std::domain_error off the orbit.
  GroupPoint cross_section(const Vec& xi) const;

  /// Superset of { h : h^T xi in eta_box for some xi in xi_box }, one box per
  /// contributing branch. Throws std::domain_error when either box meets the blind spot.
  std::vector<ParamBox> preimage(const Box& xi_box, const Box& eta_box) const;
  /// Row-wise refinement of preimage(): the range of the second coordinate
  /// given the first coordinate (shearlet2d and similitude2d only).
  Interval preimage_coord1(int branch, double c0, const Box& xi_box, const Box& eta_box) const;

 private:
  GroupKind kind_;
};

GroupChart make_group(GroupKind kind);
/// Throws std::invalid_argument naming the unsupported kind.
GroupChart make_group(std::string_view name);

/// Arc of angles covered by a box not containing the origin.
Interval angular_arc(const Box& box);

}  // namespace orbitlets
