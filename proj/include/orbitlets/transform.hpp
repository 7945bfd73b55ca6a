#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "orbitlets/bapu.hpp"
#include "orbitlets/grid.hpp"
#include "orbitlets/report.hpp"
#include "orbitlets/weights.hpp"
#include "orbitlets/window.hpp"

namespace orbitlets {

/// Haar quadrature nodes over a finite set of lattice cells.
class GroupGrid {
 public:
  /// Cells that can see supp f_hat through supp psi_hat, padded by one lattice layer.
  static GroupGrid support_driven(const FrequencySignal& f, const AnalyticWindow& psi, const WellSpreadFamily& family,
                                  const QuadratureSpec& spec);
  /// Every cell of a lattice rectangle.
  static GroupGrid over_window(const WellSpreadFamily& family, const QuadratureSpec& spec, const IndexWindow& w);

  const WellSpreadFamily& family() const { return quad_.family(); }
  const CellQuadrature& quadrature() const { return quad_; }
  const std::set<LatticeIndex>& cells() const { return cells_; }
  bool contains(const LatticeIndex& c) const { return cells_.count(c) > 0; }
  std::string describe() const;
  GroupGrid refined() const;

  /// Nodes of the grid whose slice can be nonzero for f against psi, in cell order.
  std::vector<QuadNode> nodes_for(const FrequencySignal& f, const AnalyticWindow& psi) const;
  std::size_t node_count() const { return cells_.size() * std::size_t(quad_.nodes_per_cell()); }

 private:
  GroupGrid(const WellSpreadFamily& family, const QuadratureSpec& spec, std::set<LatticeIndex> cells);

  CellQuadrature quad_;
  std::set<LatticeIndex> cells_;
};

/// (W_psi f)(., h) = |det h|^{1/2} F^{-1}(f_hat * conj(psi_hat(h^T .))) sampled on `grid`.
SampledSignal wavelet_slice(const FrequencySignal& f, const AnalyticWindow& psi, const Mat& h,
                            const FrequencyGrid& grid);

/// Single coefficient W_psi f(x, h) by a frequency Riemann sum with n samples per axis
/// over the joint support. h may be any invertible matrix.
cplx wavelet_coefficient(const FrequencySignal& f, const AnalyticWindow& psi, const Mat& h, const Vec& x, int n = 512);

/// ||W_psi f(., h)||_p. Uses Plancherel for p = 2 and an FFT otherwise, on a grid
/// fitted to the joint support in the frame (window or signal) that resolves it best.
double slice_norm(const FrequencySignal& f, const AnalyticWindow& psi, const Mat& h, double p, int n = 128);

struct SliceValue {
  QuadNode node;
  double norm = 0.0;
};

/// Slice norms of every contributing node.
std::vector<SliceValue> wavelet_slices(const FrequencySignal& f, const AnalyticWindow& psi, const GroupGrid& grid,
                                       double p, int n = 128);

/// (sum_m w_m (v(h_m) ||slice_m||_p)^q / |det h_m|)^{1/q}; p, q = infinity as max.
double mixed_norm(const std::vector<SliceValue>& slices, const WeightSpec& v, double q);

struct CoorbitOptions {
  int n = 128;                   ///< samples per axis for slice grids
  bool allow_truncation = false; ///< accept grids that clip the support set
};

/// ||W_psi f||_{L^{p,q}_v}. Throws naming the clipped cells when the grid misses
/// part of { h : supp D_h psi_hat meets supp f_hat } and truncation is not allowed.
NormReport coorbit_norm(const FrequencySignal& f, const AnalyticWindow& psi, const GroupGrid& grid,
                        const WeightSpec& v, double p, double q, const CoorbitOptions& opt = {});

struct ParsevalReport {
  double ratio = 0.0;  ///< ||W_psi f||^2 / ||f||^2
  double calderon = 0.0;
  double rel_error = 0.0;
  std::size_t nodes = 0;
};

/// Duflo-Moore check of ||W_psi f||^2_{L^2(G)} = C_psi ||f||^2_2.
ParsevalReport parseval_check(const FrequencySignal& f, const AnalyticWindow& psi, const WellSpreadFamily& family,
                              const QuadratureSpec& spec, int n = 512);

struct LocalizationReport {
  double max_deviation = 0.0;
  double max_value = 0.0;  ///< largest |F^{-1}(phi_V f_hat)| on the grid
  std::size_t nodes = 0;
};

/// F^{-1}(phi_V f_hat) against int_V |det h|^{-3/2} (W_psi f(., h) * psi(h^{-1} .)) dh
/// on one lattice cell V. The left side uses adaptive quadrature for phi_V, the right
/// side the cell's midpoint nodes with an FFT convolution per node.
LocalizationReport localization_identity_check(const FrequencySignal& f, const AnalyticWindow& psi,
                                               const WellSpreadFamily& family, const LatticeIndex& cell,
                                               const QuadratureSpec& spec, const FrequencyGrid& grid);

/// The same check at several quadrature levels with the left side computed once.
std::vector<LocalizationReport> localization_convergence(const FrequencySignal& f, const AnalyticWindow& psi,
                                                         const WellSpreadFamily& family, const LatticeIndex& cell,
                                                         const std::vector<QuadratureSpec>& specs,
                                                         const FrequencyGrid& grid);

/// phi_V(xi) = int_V |psi_hat(h^T xi)|^2 dh by Gauss-Kronrod in the scale coordinate.
double cell_integral(const AnalyticWindow& psi, const WellSpreadFamily& family, const LatticeIndex& cell,
                     const Vec& xi);

struct CovarianceValue {
  cplx lhs;
  cplx rhs;
  double deviation = 0.0;
};

/// W_{psi1}(sigma(0,g) f)(x, h) against W_{psi2} f(g^{-1} x, g^{-1} h g) with
/// psi2_hat = psi1.dilated(g^{-1}).
CovarianceValue conjugation_covariance_check(const FrequencySignal& f, const AnalyticWindow& psi1, const Mat& g,
                                             const Mat& h, const Vec& x, int n = 512);

}  // namespace orbitlets
