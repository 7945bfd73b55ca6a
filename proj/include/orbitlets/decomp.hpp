#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orbitlets/bapu.hpp"
#include "orbitlets/covering.hpp"
#include "orbitlets/grid.hpp"
#include "orbitlets/report.hpp"
#include "orbitlets/weights.hpp"
#include "orbitlets/window.hpp"

namespace orbitlets {

/// A partition of unity as seen by the decomposition norm.
class Partition {
 public:
  virtual ~Partition() = default;
  virtual int dim() const = 0;
  /// Indices whose function can be nonzero on `region`, sorted.
  virtual std::vector<LatticeIndex> indices_meeting(const Box& region) const = 0;
  /// Box containing supp phi_i.
  virtual Box support_box(const LatticeIndex& i) const = 0;
  /// Length scale on which phi_i varies, used to pick grid resolution.
  virtual double feature(const LatticeIndex& i) const = 0;
  /// phi_i on the grid points inside `clip` (all points when null); zero elsewhere.
  virtual CArray sample(const LatticeIndex& i, const FrequencyGrid& grid, const Box* clip = nullptr) const = 0;
  virtual double value(const LatticeIndex& i, const Vec& xi) const = 0;

  /// supp phi_i lies in m^{-T} box and phi_i(m^{-T} eta) varies on the scale `feature`.
  /// Pieces too thin for an axis-aligned grid are computed in the coordinates eta = m^T xi.
  struct Frame {
    Mat m;
    Box box;
    double feature = 0.0;
  };
  virtual std::optional<Frame> frame(const LatticeIndex&) const { return std::nullopt; }
};

/// The group-cell BAPU as a partition.
class BapuPartition final : public Partition {
 public:
  explicit BapuPartition(const Bapu& bapu) : bapu_(bapu) {}
  int dim() const override { return bapu_.family().chart().dim(); }
  std::vector<LatticeIndex> indices_meeting(const Box& region) const override { return bapu_.indices_meeting(region); }
  Box support_box(const LatticeIndex& i) const override { return bapu_.support_box(i); }
  double feature(const LatticeIndex& i) const override;
  CArray sample(const LatticeIndex& i, const FrequencyGrid& grid, const Box* clip = nullptr) const override {
    return bapu_.sample(i, grid, clip);
  }
  double value(const LatticeIndex& i, const Vec& xi) const override { return bapu_.phi(i, xi); }
  std::optional<Frame> frame(const LatticeIndex& i) const override {
    // The cell spread in U at most doubles the window's own variation.
    return Frame{bapu_.family().point(i).matrix, bapu_.base_set().bounding_box(),
                 0.5 * bapu_.window().feature_scale(Mat::identity(dim()))};
  }

 private:
  const Bapu& bapu_;
};

/// theta(x - i) on the line, where theta = 1 on [-1/4, 1/4], 0 off (-3/4, 3/4) and the
/// translates sum to one. Index i is stored in LatticeIndex::scale.
class TranslatePartition final : public Partition {
 public:
  TranslatePartition(int first, int last);
  static double theta(double x);
  int dim() const override { return 1; }
  std::vector<LatticeIndex> indices_meeting(const Box& region) const override;
  Box support_box(const LatticeIndex& i) const override;
  double feature(const LatticeIndex&) const override { return 0.125; }
  CArray sample(const LatticeIndex& i, const FrequencyGrid& grid, const Box* clip = nullptr) const override;
  double value(const LatticeIndex& i, const Vec& xi) const override { return theta(xi[0] - i.scale); }

 private:
  int first_;
  int last_;
};

/// F^{-1}(phi f_hat) for samples on a common grid.
SampledSignal localize(const SampledSignal& f_hat, const CArray& phi);

struct DecompOptions {
  int n = 128;          ///< minimum samples per axis of a piece grid
  double margin = 4.0;  ///< frequency box / piece support, sets the spatial step
  bool prefer_frame = false;  ///< use the partition's frame even when an axis-aligned grid fits
};

/// ||(u_i ||F^{-1}(phi_i f_hat)||_p)_i||_{l^q}. Every index whose phi_i meets supp f_hat
/// must carry a weight; otherwise the missing indices are named in the error.
NormReport decomp_norm(const FrequencySignal& f, const Partition& phi, const DiscretizedWeight& u, double p, double q,
                       const DecompOptions& opt = {});

/// Same norm with every piece computed on one shared grid.
NormReport decomp_norm_on_grid(const FrequencySignal& f, const Partition& phi, const DiscretizedWeight& u, double p,
                               double q, const FrequencyGrid& grid);

struct CauchyResult {
  double norm = 0.0;
  double closed_form = 0.0;
  double rel_err = 0.0;
};

/// Analyzing bump of the Cauchy example: radius 1/5 around 0, inside the plateau of theta.
AnalyticWindow cauchy_bump();
/// f_n = sum_{j <= n} 4^j L_j psi on the frequency side, L_j the translation by j.
FrequencySignal cauchy_partial_sum(int n);
/// ||f_n - f_m|| in the decomposition space of Q_i = (i - 3/4, i + 3/4) with u_i = 10^{-i},
/// p = q = 1, against ||F^{-1} psi||_1 sum_{i=m+1}^{n} (4/10)^i.
CauchyResult cauchy_example(int n, int m, const FrequencyGrid& grid);

}  // namespace orbitlets
