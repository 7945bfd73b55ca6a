#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "orbitlets/covering.hpp"
#include "orbitlets/grid.hpp"
#include "orbitlets/window.hpp"

namespace orbitlets {

/// Tensor midpoint rule per cell in local coordinates.
struct QuadratureSpec {
  int nodes0 = 64;  ///< along the scale coordinate
  int nodes1 = 64;  ///< along the shear or angle coordinate (unused for dyadic1d)

  /// Default per chart. The similitude angle cell spans 2 pi and gets 128 nodes.
  static QuadratureSpec for_chart(GroupKind kind) {
    return kind == GroupKind::similitude2d ? QuadratureSpec{64, 128} : QuadratureSpec{64, 64};
  }
  QuadratureSpec refined() const { return {2 * nodes0, 2 * nodes1}; }
};

struct QuadNode {
  GroupPoint h;
  double weight = 0.0;  ///< Haar weight
  LatticeIndex cell;
};

/// Region of the group that can matter for frequencies in `xi` against a window supported in `eta`.
struct Footprint {
  Box xi;
  Box eta;
  std::vector<ParamBox> params;
};

/// Midpoint quadrature on the cells h_i U of a well-spread family. Nodes are
/// generated on demand and restricted to footprints, so no node list is stored.
class CellQuadrature {
 public:
  CellQuadrature(WellSpreadFamily family, QuadratureSpec spec);

  const WellSpreadFamily& family() const { return family_; }
  const QuadratureSpec& spec() const { return spec_; }
  int nodes_per_cell() const;

  /// Empty footprint (no contributing cells) when either box meets the blind spot.
  Footprint footprint(const Box& xi, const Box& eta) const;
  std::vector<LatticeIndex> cells(const Footprint& fp) const;
  /// Calls f(node) for the nodes of `cell` with h^T xi in eta possible.
  void visit(const LatticeIndex& cell, const Footprint& fp, const std::function<void(const QuadNode&)>& f) const;
  /// Every node of a cell.
  void visit_all(const LatticeIndex& cell, const std::function<void(const QuadNode&)>& f) const;
  /// Nodes of every cell meeting the footprint.
  std::vector<QuadNode> collect(const Footprint& fp) const;

 private:
  QuadNode node(const LatticeIndex& cell, int m, int n) const;

  WellSpreadFamily family_;
  QuadratureSpec spec_;
};

/// Integral of |psi_hat(h^T xi)|^2 over H via the cell quadrature.
double calderon_integral(const AnalyticWindow& psi, const CellQuadrature& quad, const Vec& xi);

/// Same integral on the window's side: int |psi_hat(eta)|^2 J(eta) d eta with the
/// orbit-map density J = 1/|eta|, 1/|eta|^2 or 1/eta_1^2.
double calderon_constant(const AnalyticWindow& psi, const GroupChart& chart, int samples_per_axis = 512);

struct CalderonReport {
  double constant = 0.0;            ///< window-side value
  std::vector<double> values;       ///< group quadrature at each probe
  double max_rel_deviation = 0.0;   ///< max |value - constant| / constant
};

/// Group-side integrals at the probes compared against the window-side constant.
/// When `allowed` is given, probes needing cells outside it are rejected.
CalderonReport calderon(const AnalyticWindow& psi, const WellSpreadFamily& family, const QuadratureSpec& spec,
                        const std::vector<Vec>& probes, const std::optional<IndexWindow>& allowed = std::nullopt);

/// Analytic superset of U^{-T} supp psi_hat used as the covering base set.
BaseSet bapu_base_set(const AnalyticWindow& psi, const WellSpreadFamily& family);

/// phi_i(xi) = (1 / C) sum over nodes h in cell i of w_h |psi_hat(h^T xi)|^2.
class Bapu {
 public:
  /// C defaults to the window-side Calderon constant.
  Bapu(AnalyticWindow psi, WellSpreadFamily family, QuadratureSpec spec, std::optional<double> C = std::nullopt);

  const AnalyticWindow& window() const { return psi_; }
  const CellQuadrature& quadrature() const { return quad_; }
  const WellSpreadFamily& family() const { return quad_.family(); }
  double C() const { return C_; }
  const BaseSet& base_set() const { return q_; }

  double phi(const LatticeIndex& i, const Vec& xi) const;
  /// All indices with phi_i(xi) possibly nonzero, with their values.
  std::vector<std::pair<LatticeIndex, double>> phis(const Vec& xi) const;
  double sum(const Vec& xi) const;
  /// Indices whose phi_i can be nonzero somewhere in `region`.
  std::vector<LatticeIndex> indices_meeting(const Box& region) const;
  /// Bounding box of h_i^{-T} Q, which contains supp phi_i.
  Box support_box(const LatticeIndex& i) const;
  /// phi_i sampled on a grid by accumulating each node's footprint; with `clip`,
  /// only grid points inside that box are filled. With `frame`, grid point eta holds
  /// phi_i(frame * eta) and `clip` is in eta coordinates.
  CArray sample(const LatticeIndex& i, const FrequencyGrid& grid, const Box* clip = nullptr,
                const Mat* frame = nullptr) const;

 private:
  AnalyticWindow psi_;
  CellQuadrature quad_;
  double C_ = 1.0;
  BaseSet q_;
};

struct L1Bound {
  double norm = 0.0;   ///< grid L^1 norm of F^{-1} phi_i
  double bound = 0.0;  ///< mu_H(U_i) ||F^{-1} |psi_hat|^2||_1 / C
  double gamma_l1 = 0.0;
  bool within(double rel_tol) const { return norm <= bound * (1.0 + rel_tol); }
};

/// Rejects grids too coarse to resolve supp phi_i. The margin sets the spatial step
/// 1 / (2 margin half-width); L^1 sums of oscillating moduli need it well above 1.
L1Bound bapu_l1_norm(const Bapu& bapu, const LatticeIndex& i, int n, double margin = 8.0);

}  // namespace orbitlets
