#pragma once

#include <array>
#include <compare>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "orbitlets/group.hpp"
#include "orbitlets/linalg.hpp"

namespace orbitlets {

/// Lattice label of a well-spread family member.
///   dyadic1d      h = branch * 2^{-scale}
///   similitude2d  h = 2^{-scale} * I
///   shearlet2d    h = branch * A_scale * S_shear,  A_j = diag(2^j, 2^{j/2}), S_k = [[1, k], [0, 1]]
struct LatticeIndex {
  int scale = 0;
  int shear = 0;
  int branch = 1;

  auto operator<=>(const LatticeIndex&) const = default;
  friend std::ostream& operator<<(std::ostream& os, const LatticeIndex& i);
};

std::string to_string(const LatticeIndex& i);

/// Lattice rectangle: scales in [scale_lo, scale_hi], shears in [-shear_radius, shear_radius].
struct IndexWindow {
  int scale_lo = 0;
  int scale_hi = 0;
  int shear_radius = 0;
};

/// Fixed lattice discretization (h_i) of a chart together with its generator cell U.
///
/// The cells h_i U tile the group exactly, so the disjoint cells U_i of the
/// partition coincide with h_i U and need no set subtraction. Cells are described
/// through local coordinates u in [0, 1)^2 in which every cell is the left
/// translate of the base cell.
class WellSpreadFamily {
 public:
  explicit WellSpreadFamily(GroupChart chart);

  const GroupChart& chart() const { return chart_; }
  GroupPoint point(const LatticeIndex& i) const;

  /// Chart coordinates of the cell point with local coordinates (u0, u1).
  ChartParams cell_params(const LatticeIndex& i, double u0, double u1) const;
  /// Haar density with respect to du0 du1 (du0 alone for dyadic1d).
  double cell_density(double u0) const;
  /// Haar measure of every cell.
  double cell_measure() const;

  LatticeIndex cell_of(const ChartParams& p) const;
  std::array<double, 2> local_coords(const LatticeIndex& i, const ChartParams& p) const;

  /// Superset of the cells meeting a region of chart coordinates.
  std::vector<LatticeIndex> cells_meeting(const ParamBox& box) const;
  /// Every index in a lattice rectangle, in lexicographic order.
  std::vector<LatticeIndex> enumerate(const IndexWindow& w) const;
  bool uses_shear() const { return chart_.kind() == GroupKind::shearlet2d; }

 private:
  GroupChart chart_;
};

/// Open base set of a covering with closed-form membership.
class BaseSet {
 public:
  enum class Kind { interval, symmetric_interval, annulus, box };

  static BaseSet interval(double lo, double hi);
  static BaseSet symmetric_interval(double lo, double hi);
  static BaseSet annulus(double lo, double hi);
  static BaseSet box(const Vec& lo, const Vec& hi);

  Kind kind() const { return kind_; }
  int dim() const { return kind_ == Kind::annulus || kind_ == Kind::box ? 2 : 1; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const Box& corners() const { return box_; }

  bool contains(const Vec& x) const;
  Box bounding_box() const;
  /// Closure of *this inside the open set `outer`.
  bool compactly_inside(const BaseSet& outer) const;
  /// Deterministic sample cloud of roughly `per_axis`^d points of the set.
  std::vector<Vec> sample(int per_axis) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::interval;
  double lo_ = 0.0;
  double hi_ = 0.0;
  Box box_;
};

/// How an intersection decision was reached.
enum class IntersectionMethod { analytic, approximate };

/// Covering of the form Q_i = T_i Q + b_i over a finite index list.
class Covering {
 public:
  struct Member {
    LatticeIndex index;
    Mat t;
    Vec b;
  };

  Covering(BaseSet q, std::vector<Member> members);

  const BaseSet& base() const { return q_; }
  const std::vector<Member>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  /// Position of an index in members(), or -1.
  int find(const LatticeIndex& i) const;

  bool member_contains(std::size_t m, const Vec& xi) const;
  /// Whether Q_m and Q_n intersect; reports whether the answer is exact.
  bool intersects(std::size_t m, std::size_t n, IntersectionMethod* method = nullptr) const;
  double structure_constant(std::size_t m, std::size_t n) const;
  /// Same covering with another base set (e.g. P inside Q).
  Covering with_base(const BaseSet& p) const;

 private:
  BaseSet q_;
  std::vector<Member> members_;
  std::map<LatticeIndex, int> lookup_;
};

/// Q_i = h_i^{-T} Q over a window of a well-spread family.
class InducedCovering {
 public:
  /// Rejects Q whose closure meets the blind spot.
  InducedCovering(WellSpreadFamily family, BaseSet q, const IndexWindow& window);

  const WellSpreadFamily& family() const { return family_; }
  const Covering& covering() const { return cover_; }
  const BaseSet& base() const { return cover_.base(); }
  bool contains(const LatticeIndex& i, const Vec& xi) const;
  /// Window indices whose member meets `region` (bounding-box test plus exact membership sample).
  std::vector<LatticeIndex> indices_meeting(const Box& region) const;
  /// Throws naming an uncovered sample when some orbit point of `region` lies in no member.
  void require_coverage(const Box& region, int samples_per_axis = 64) const;
  Box member_box(const LatticeIndex& i) const;

 private:
  WellSpreadFamily family_;
  Covering cover_;
};

/// One-dimensional covering Q_i = Q + i used by the Cauchy example.
Covering affine_translates(const BaseSet& q, int first, int last);

struct ClusterTable {
  std::vector<std::vector<int>> neighbors;  ///< neighbors[m] lists member positions n with Q_m meeting Q_n.
  std::size_t max_cluster = 0;
  double max_structure_constant = 1.0;
  bool exact = true;  ///< false when some pair was decided by sampling.
  bool symmetric() const;
  bool reflexive() const;
};

ClusterTable clusters(const Covering& c);

struct StructureCertificate {
  bool is_structured = false;
  double C = 1.0;
  std::size_t n0 = 0;
  bool exact = true;
  std::string detail;
};

/// Conditions of a structured admissible covering over the members at hand:
/// P compactly inside Q, both families cover `region`, bounded clusters.
StructureCertificate structured_check(const InducedCovering& cover, const BaseSet& p, const Box& region,
                                      int samples_per_axis = 64);

}  // namespace orbitlets
