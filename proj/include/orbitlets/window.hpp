#pragma once

#include <complex>
#include <vector>

#include "orbitlets/group.hpp"
#include "orbitlets/linalg.hpp"

namespace orbitlets {

enum class Profile { bump, plateau, zero };

/// Compactly supported frequency window evaluated in closed form.
///
/// The value at xi is amplitude * profile(|A (xi - center)|), supported on the
/// ellipsoid |A (xi - center)| < 1. Dual-action pullbacks land off any grid, so
/// windows are never stored as samples.
class AnalyticWindow {
 public:
  /// exp(1 - 1/(1 - rho^2)) on rho < 1, peak value 1 at the center.
  static AnalyticWindow bump(const Vec& center, const Mat& shape);
  static AnalyticWindow bump(const Vec& center, double radius);
  /// Identically 1 on the inner ball, 0 off the outer ball, smooth in between.
  static AnalyticWindow plateau(const Vec& center, double inner_radius, double outer_radius);
  static AnalyticWindow zero(int dim);

  double operator()(const Vec& xi) const;

  /// Frequency side of sigma(0, g) psi: |det g|^{1/2} psi_hat(g^T xi). Stays analytic.
  AnalyticWindow dilated(const Mat& g) const;
  AnalyticWindow scaled(double factor) const;

  /// Rejects windows whose closed support meets the blind spot of the chart.
  void require_inside_orbit(const GroupChart& chart) const;

  int dim() const { return center_.dim(); }
  bool is_zero() const { return profile_ == Profile::zero || amplitude_ == 0.0; }
  Profile profile() const { return profile_; }
  const Vec& center() const { return center_; }
  const Mat& shape() const { return shape_; }
  double amplitude() const { return amplitude_; }
  double inner_ratio() const { return inner_; }
  /// Bounding box of the closed support.
  Box support_box() const;
  /// Bounding box of m * (closed support).
  Box support_box(const Mat& m) const;
  /// Shortest length over which the window varies, in coordinates eta with xi = m eta.
  double feature_scale(const Mat& m) const;
  bool in_support(const Vec& xi) const { return rho(xi) < 1.0; }
  double rho(const Vec& xi) const { return (shape_ * (xi - center_)).norm(); }

 private:
  AnalyticWindow(Profile p, const Vec& c, const Mat& a, double inner, double amp);

  Profile profile_;
  Vec center_;
  Mat shape_;
  double inner_ = 0.0;
  double amplitude_ = 1.0;
};

/// Smooth step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t);

/// Default analyzing window of a chart: a bump of radius 1/2 at its canonical
/// interior point (1, (1,0) and (3,3) respectively).
AnalyticWindow default_window(const GroupChart& chart);

/// Band-limited test signal: f_hat(xi) = sum_k c_k exp(-2 pi i <s_k, xi>) w_k(xi).
class FrequencySignal {
 public:
  struct Term {
    std::complex<double> coefficient;
    Vec shift;
    AnalyticWindow window;
  };

  FrequencySignal() = default;
  explicit FrequencySignal(int dim) : dim_(dim) {}
  FrequencySignal(const AnalyticWindow& w);

  FrequencySignal& add(std::complex<double> c, const AnalyticWindow& w);
  FrequencySignal& add(std::complex<double> c, const Vec& shift, const AnalyticWindow& w);

  std::complex<double> operator()(const Vec& xi) const;
  /// Frequency side of pi(0, g) f.
  FrequencySignal dilated(const Mat& g) const;
  FrequencySignal scaled(std::complex<double> c) const;
  FrequencySignal operator+(const FrequencySignal& o) const;
  FrequencySignal operator-(const FrequencySignal& o) const;

  int dim() const { return dim_; }
  bool empty() const { return terms_.empty(); }
  /// True when every term vanishes identically.
  bool is_zero() const;
  const std::vector<Term>& terms() const { return terms_; }
  Box support_box() const;
  /// Largest |xi| over the support (0 for the empty signal).
  double max_frequency() const;

 private:
  int dim_ = 2;
  std::vector<Term> terms_;
};

}  // namespace orbitlets
