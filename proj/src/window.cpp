#include "orbitlets/window.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace orbitlets {

namespace {

double edge(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = edge(t), b = edge(1.0 - t);
  return a / (a + b);
}

AnalyticWindow::AnalyticWindow(Profile p, const Vec& c, const Mat& a, double inner, double amp)
    : profile_(p), center_(c), shape_(a), inner_(inner), amplitude_(amp) {
  if (a.dim() != c.dim()) throw std::invalid_argument("window shape and center differ in dimension");
  if (p != Profile::zero && a.det() == 0.0) throw std::invalid_argument("window shape is singular");
}

AnalyticWindow AnalyticWindow::bump(const Vec& center, const Mat& shape) {
  return AnalyticWindow(Profile::bump, center, shape, 0.0, 1.0);
}

AnalyticWindow AnalyticWindow::bump(const Vec& center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("bump radius must be positive");
  return bump(center, Mat::scalar(center.dim(), 1.0 / radius));
}

AnalyticWindow AnalyticWindow::plateau(const Vec& center, double inner_radius, double outer_radius) {
  if (!(inner_radius > 0.0) || !(outer_radius > inner_radius))
    throw std::invalid_argument("plateau window needs 0 < inner radius < outer radius");
  return AnalyticWindow(Profile::plateau, center, Mat::scalar(center.dim(), 1.0 / outer_radius),
                        inner_radius / outer_radius, 1.0);
}

AnalyticWindow AnalyticWindow::zero(int dim) {
  return AnalyticWindow(Profile::zero, Vec::zero(dim), Mat::identity(dim), 0.0, 0.0);
}

double AnalyticWindow::operator()(const Vec& xi) const {
  if (profile_ == Profile::zero) return 0.0;
  const Vec d = shape_ * (xi - center_);
  const double r2 = d.dot(d);
  if (r2 >= 1.0) return 0.0;
  if (profile_ == Profile::bump) return amplitude_ * std::exp(1.0 - 1.0 / (1.0 - r2));
  const double r = std::sqrt(r2);
  if (r <= inner_) return amplitude_;
  return amplitude_ * smooth_step((1.0 - r) / (1.0 - inner_));
}

AnalyticWindow AnalyticWindow::dilated(const Mat& g) const {
  if (profile_ == Profile::zero) return *this;
  const Mat gt = g.transpose();
  return AnalyticWindow(profile_, gt.inverse() * center_, shape_ * gt, inner_,
                        amplitude_ * std::sqrt(std::abs(g.det())));
}

AnalyticWindow AnalyticWindow::scaled(double factor) const {
  AnalyticWindow w = *this;
  w.amplitude_ *= factor;
  return w;
}

Box AnalyticWindow::support_box() const { return support_box(Mat::identity(dim())); }

Box AnalyticWindow::support_box(const Mat& m) const {
  const Vec c = m * center_;
  if (profile_ == Profile::zero) return Box{c, c};
  // Half-widths of an ellipsoid image are the row norms of m A^{-1}.
  const Mat inv = m * shape_.inverse();
  Box b{c, c};
  for (int i = 0; i < dim(); ++i) {
    double h = 0.0;
    for (int j = 0; j < dim(); ++j) h += inv(i, j) * inv(i, j);
    h = std::sqrt(h);
    b.lo[i] -= h;
    b.hi[i] += h;
  }
  return b;
}

void AnalyticWindow::require_inside_orbit(const GroupChart& chart) const {
  if (dim() != chart.dim()) throw std::invalid_argument("window dimension does not match the chart");
  if (is_zero()) return;
  if (chart.blind_spot_distance(support_box()) <= 0.0) {
    std::ostringstream os;
    os << "window support around " << center_ << " meets the blind spot of " << to_string(chart.kind());
    throw std::domain_error(os.str());
  }
}

double AnalyticWindow::feature_scale(const Mat& m) const {
  if (is_zero()) return kInf;
  const double transition = profile_ == Profile::plateau ? 1.0 - inner_ : 1.0;
  return transition / (shape_ * m).spectral_norm();
}

AnalyticWindow default_window(const GroupChart& chart) {
  switch (chart.kind()) {
    case GroupKind::dyadic1d: return AnalyticWindow::bump(Vec(1.0), 0.5);
    case GroupKind::similitude2d: return AnalyticWindow::bump(Vec(1.0, 0.0), 0.5);
    case GroupKind::shearlet2d: return AnalyticWindow::bump(Vec(3.0, 3.0), 0.5);
  }
  throw std::logic_error("unknown chart");
}

FrequencySignal::FrequencySignal(const AnalyticWindow& w) : dim_(w.dim()) { add(1.0, w); }

FrequencySignal& FrequencySignal::add(std::complex<double> c, const AnalyticWindow& w) {
  return add(c, Vec::zero(w.dim()), w);
}

FrequencySignal& FrequencySignal::add(std::complex<double> c, const Vec& shift, const AnalyticWindow& w) {
  if (!terms_.empty() && w.dim() != dim_) throw std::invalid_argument("signal terms differ in dimension");
  dim_ = w.dim();
  terms_.push_back({c, shift, w});
  return *this;
}

std::complex<double> FrequencySignal::operator()(const Vec& xi) const {
  std::complex<double> s = 0.0;
  for (const auto& t : terms_) {
    const double w = t.window(xi);
    if (w == 0.0) continue;
    const double phase = -2.0 * kPi * t.shift.dot(xi);
    s += t.coefficient * std::polar(w, phase);
  }
  return s;
}

FrequencySignal FrequencySignal::dilated(const Mat& g) const {
  FrequencySignal out(dim_);
  for (const auto& t : terms_) out.add(t.coefficient, g * t.shift, t.window.dilated(g));
  return out;
}

FrequencySignal FrequencySignal::scaled(std::complex<double> c) const {
  FrequencySignal out = *this;
  for (auto& t : out.terms_) t.coefficient *= c;
  return out;
}

FrequencySignal FrequencySignal::operator+(const FrequencySignal& o) const {
  FrequencySignal out = *this;
  for (const auto& t : o.terms_) out.add(t.coefficient, t.shift, t.window);
  return out;
}

FrequencySignal FrequencySignal::operator-(const FrequencySignal& o) const { return *this + o.scaled(-1.0); }

Box FrequencySignal::support_box() const {
  bool any = false;
  Box b{Vec::zero(dim_), Vec::zero(dim_)};
  for (const auto& t : terms_) {
    if (t.window.is_zero() || t.coefficient == 0.0) continue;
    b = any ? b.unite(t.window.support_box()) : t.window.support_box();
    any = true;
  }
  return b;
}

bool FrequencySignal::is_zero() const {
  for (const auto& t : terms_)
    if (!t.window.is_zero() && t.coefficient != 0.0) return false;
  return true;
}

double FrequencySignal::max_frequency() const { return is_zero() ? 0.0 : support_box().max_norm(); }

}  // namespace orbitlets
