#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace orbitlets {

/// Point of R^d for d in {1, 2}.
class Vec {
 public:
  Vec() = default;
  explicit Vec(double x) : dim_(1), c_{x, 0.0} {}
  Vec(double x, double y) : dim_(2), c_{x, y} {}

  static Vec zero(int dim) { return dim == 1 ? Vec(0.0) : Vec(0.0, 0.0); }

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

  double dot(const Vec& o) const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += (*this)[i] * o[i];
    return s;
  }
  double norm() const { return std::sqrt(dot(*this)); }

  Vec operator+(const Vec& o) const {
    Vec r = *this;
    for (int i = 0; i < dim_; ++i) r[i] += o[i];
    return r;
  }
  Vec operator-(const Vec& o) const {
    Vec r = *this;
    for (int i = 0; i < dim_; ++i) r[i] -= o[i];
    return r;
  }
  Vec operator*(double s) const {
    Vec r = *this;
    for (int i = 0; i < dim_; ++i) r[i] *= s;
    return r;
  }
  friend Vec operator*(double s, const Vec& v) { return v * s; }

  friend std::ostream& operator<<(std::ostream& os, const Vec& v) {
    os << '(' << v[0];
    if (v.dim_ == 2) os << ", " << v[1];
    return os << ')';
  }

 private:
  int dim_ = 2;
  std::array<double, 2> c_{};
};

/// d x d real matrix for d in {1, 2}, row-major.
class Mat {
 public:
  Mat() = default;
  explicit Mat(double a) : dim_(1), m_{a, 0.0, 0.0, 0.0} {}
  Mat(double a, double b, double c, double d) : dim_(2), m_{a, b, c, d} {}

  static Mat identity(int dim) { return dim == 1 ? Mat(1.0) : Mat(1.0, 0.0, 0.0, 1.0); }
  static Mat scalar(int dim, double s) { return dim == 1 ? Mat(s) : Mat(s, 0.0, 0.0, s); }

  int dim() const { return dim_; }
  double operator()(int r, int c) const { return m_[static_cast<std::size_t>(2 * r + c)]; }
  double& operator()(int r, int c) { return m_[static_cast<std::size_t>(2 * r + c)]; }

  double det() const { return dim_ == 1 ? m_[0] : m_[0] * m_[3] - m_[1] * m_[2]; }

  Mat transpose() const { return dim_ == 1 ? *this : Mat(m_[0], m_[2], m_[1], m_[3]); }

  Mat inverse() const {
    const double d = det();
    if (d == 0.0) throw std::domain_error("singular matrix");
    if (dim_ == 1) return Mat(1.0 / m_[0]);
    return Mat(m_[3] / d, -m_[1] / d, -m_[2] / d, m_[0] / d);
  }

  Mat operator*(const Mat& o) const {
    if (dim_ == 1) return Mat(m_[0] * o.m_[0]);
    return Mat(m_[0] * o.m_[0] + m_[1] * o.m_[2], m_[0] * o.m_[1] + m_[1] * o.m_[3],
               m_[2] * o.m_[0] + m_[3] * o.m_[2], m_[2] * o.m_[1] + m_[3] * o.m_[3]);
  }
  Mat operator*(double s) const {
    Mat r = *this;
    for (auto& x : r.m_) x *= s;
    return r;
  }

  Vec operator*(const Vec& v) const {
    if (dim_ == 1) return Vec(m_[0] * v[0]);
    return Vec(m_[0] * v[0] + m_[1] * v[1], m_[2] * v[0] + m_[3] * v[1]);
  }

  /// Singular values, largest first (closed form for 2x2).
  std::array<double, 2> singular_values() const {
    if (dim_ == 1) return {std::abs(m_[0]), std::abs(m_[0])};
    const double a = m_[0], b = m_[1], c = m_[2], d = m_[3];
    const double s1 = a * a + b * b + c * c + d * d;
    const double s2 = std::hypot(a * a + b * b - c * c - d * d, 2.0 * (a * c + b * d));
    const double big = std::sqrt(0.5 * (s1 + s2));
    const double small = big > 0.0 ? std::abs(det()) / big : 0.0;
    return {big, small};
  }

  double spectral_norm() const { return singular_values()[0]; }

  double max_abs_diff(const Mat& o) const {
    double r = 0.0;
    for (std::size_t i = 0; i < 4; ++i) r = std::max(r, std::abs(m_[i] - o.m_[i]));
    return r;
  }

  friend std::ostream& operator<<(std::ostream& os, const Mat& m) {
    if (m.dim_ == 1) return os << '[' << m.m_[0] << ']';
    return os << "[[" << m.m_[0] << ", " << m.m_[1] << "], [" << m.m_[2] << ", " << m.m_[3]
              << "]]";
  }

 private:
  int dim_ = 2;
  std::array<double, 4> m_{1.0, 0.0, 0.0, 1.0};
};

/// Closed interval with conservative arithmetic, used for support geometry.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval hull(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

  bool contains_zero() const { return lo <= 0.0 && hi >= 0.0; }
  bool empty() const { return lo > hi; }
  double width() const { return hi - lo; }
  bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }

  Interval operator+(const Interval& o) const { return {lo + o.lo, hi + o.hi}; }
  Interval operator-(const Interval& o) const { return {lo - o.hi, hi - o.lo}; }
  Interval operator*(double s) const { return hull(lo * s, hi * s); }
  Interval operator*(const Interval& o) const {
    const double p[4] = {lo * o.lo, lo * o.hi, hi * o.lo, hi * o.hi};
    return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
  }
  Interval reciprocal() const {
    if (contains_zero()) throw std::domain_error("interval reciprocal across zero");
    return hull(1.0 / lo, 1.0 / hi);
  }
  Interval abs() const {
    if (contains_zero()) return {0.0, std::max(-lo, hi)};
    return hull(std::abs(lo), std::abs(hi));
  }
  Interval pad(double margin) const { return {lo - margin, hi + margin}; }
  Interval intersect(const Interval& o) const { return {std::max(lo, o.lo), std::min(hi, o.hi)}; }
};

/// Axis-aligned box in R^d.
struct Box {
  Vec lo;
  Vec hi;

  int dim() const { return lo.dim(); }
  Interval axis(int i) const { return {lo[i], hi[i]}; }
  bool contains(const Vec& p) const {
    for (int i = 0; i < dim(); ++i)
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
  }
  Box unite(const Box& o) const {
    Box r = *this;
    for (int i = 0; i < dim(); ++i) {
      r.lo[i] = std::min(lo[i], o.lo[i]);
      r.hi[i] = std::max(hi[i], o.hi[i]);
    }
    return r;
  }
  Box pad(double m) const {
    Box r = *this;
    for (int i = 0; i < dim(); ++i) {
      r.lo[i] -= m;
      r.hi[i] += m;
    }
    return r;
  }
  bool overlaps(const Box& o) const {
    for (int i = 0; i < dim(); ++i)
      if (!axis(i).overlaps(o.axis(i))) return false;
    return true;
  }
  /// Largest |p| over the box.
  double max_norm() const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) {
      const double m = std::max(std::abs(lo[i]), std::abs(hi[i]));
      s += m * m;
    }
    return std::sqrt(s);
  }
  Box intersect(const Box& o) const {
    Box r = *this;
    for (int i = 0; i < dim(); ++i) {
      r.lo[i] = std::max(lo[i], o.lo[i]);
      r.hi[i] = std::min(hi[i], o.hi[i]);
    }
    return r;
  }
  bool empty() const {
    for (int i = 0; i < dim(); ++i)
      if (lo[i] > hi[i]) return true;
    return false;
  }
  Vec mid() const { return (lo + hi) * 0.5; }
  double max_half_side() const {
    double h = 0.0;
    for (int i = 0; i < dim(); ++i) h = std::max(h, 0.5 * (hi[i] - lo[i]));
    return h;
  }
  /// Smallest |p| over the box.
  double min_norm() const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) {
      const double m = axis(i).contains_zero() ? 0.0 : std::min(std::abs(lo[i]), std::abs(hi[i]));
      s += m * m;
    }
    return std::sqrt(s);
  }
};

/// Bounding box of the image of `box` under the linear map `t`.
inline Box image(const Mat& t, const Box& box) {
  if (box.dim() == 1) {
    const Interval iv = Interval::hull(t(0, 0) * box.lo[0], t(0, 0) * box.hi[0]);
    return Box{Vec(iv.lo), Vec(iv.hi)};
  }
  const Vec corners[4] = {Vec(box.lo[0], box.lo[1]), Vec(box.hi[0], box.lo[1]), Vec(box.lo[0], box.hi[1]),
                          Vec(box.hi[0], box.hi[1])};
  Box out{t * corners[0], t * corners[0]};
  for (const auto& c : corners) {
    const Vec p = t * c;
    out = out.unite(Box{p, p});
  }
  return out;
}

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kLn2 = 0.69314718055994530942;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace orbitlets
