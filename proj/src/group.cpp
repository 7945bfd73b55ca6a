#include "orbitlets/group.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace orbitlets {

namespace {

constexpr double kStructureTol = 1e-9;

int sign_of(double x) { return x < 0.0 ? -1 : 1; }

double wrap_angle(double a) {
  double r = std::fmod(a, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  return r;
}

/// Interval of |x| for x in an interval that does not contain zero.
Interval abs_range(const Interval& iv, const char* what) {
  if (iv.contains_zero()) throw std::domain_error(std::string(what) + " meets the blind spot");
  return iv.abs();
}

}  // namespace

GroupKind parse_group_kind(std::string_view name) {
  if (name == "dyadic1d") return GroupKind::dyadic1d;
  if (name == "similitude2d") return GroupKind::similitude2d;
  if (name == "shearlet2d") return GroupKind::shearlet2d;
  throw std::invalid_argument("unsupported group kind '" + std::string(name) +
                              "' (expected dyadic1d, similitude2d or shearlet2d)");
}

std::string_view to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::dyadic1d: return "dyadic1d";
    case GroupKind::similitude2d: return "similitude2d";
    case GroupKind::shearlet2d: return "shearlet2d";
  }
  return "?";
}

GroupChart::GroupChart(GroupKind kind) : kind_(kind) {}

GroupChart make_group(GroupKind kind) { return GroupChart(kind); }
GroupChart make_group(std::string_view name) { return GroupChart(parse_group_kind(name)); }

std::vector<int> GroupChart::branches() const {
  if (kind_ == GroupKind::similitude2d) return {1};
  return {1, -1};
}

GroupPoint GroupChart::element(const ChartParams& p) const {
  GroupPoint g;
  g.params = p;
  switch (kind_) {
    case GroupKind::dyadic1d: {
      const double a = p.branch * std::exp(p.coords[0]);
      g.matrix = Mat(a);
      g.det_abs = std::abs(a);
      break;
    }
    case GroupKind::similitude2d: {
      const double r = std::exp(p.coords[0]);
      const double c = std::cos(p.coords[1]), s = std::sin(p.coords[1]);
      g.matrix = Mat(r * c, r * s, -r * s, r * c);
      g.params.branch = 1;
      g.det_abs = r * r;
      break;
    }
    case GroupKind::shearlet2d: {
      const double a = std::exp(p.coords[0]);
      const double b = a * p.coords[1];
      const double e = p.branch;
      g.matrix = Mat(e * a, e * b, 0.0, e * std::sqrt(a));
      g.det_abs = a * std::sqrt(a);
      break;
    }
  }
  return g;
}

GroupPoint GroupChart::identity() const { return element(ChartParams{1, {0.0, 0.0}}); }

ChartParams GroupChart::params_of(const Mat& m) const {
  if (m.dim() != dim()) throw std::invalid_argument("matrix dimension does not match chart");
  ChartParams p;
  switch (kind_) {
    case GroupKind::dyadic1d: {
      const double a = m(0, 0);
      if (a == 0.0) throw std::domain_error("zero is not in the dyadic group");
      p.branch = sign_of(a);
      p.coords = {std::log(std::abs(a)), 0.0};
      break;
    }
    case GroupKind::similitude2d: {
      const double scale = std::max(std::abs(m(0, 0)), std::abs(m(0, 1))) + 1.0;
      if (std::abs(m(0, 0) - m(1, 1)) > kStructureTol * scale ||
          std::abs(m(0, 1) + m(1, 0)) > kStructureTol * scale)
        throw std::domain_error("matrix is not a similitude");
      const double r = std::hypot(m(0, 0), m(0, 1));
      if (r == 0.0) throw std::domain_error("zero matrix is not a similitude");
      p.branch = 1;
      p.coords = {std::log(r), wrap_angle(std::atan2(m(0, 1), m(0, 0)))};
      break;
    }
    case GroupKind::shearlet2d: {
      const int e = sign_of(m(0, 0));
      const double a = e * m(0, 0);
      const double scale = std::abs(m(0, 0)) + std::abs(m(0, 1)) + 1.0;
      if (a == 0.0 || std::abs(m(1, 0)) > kStructureTol * scale ||
          std::abs(e * m(1, 1) - std::sqrt(a)) > kStructureTol * scale)
        throw std::domain_error("matrix is not a shearlet group element");
      p.branch = e;
      p.coords = {std::log(a), e * m(0, 1) / a};
      break;
    }
  }
  return p;
}

GroupPoint GroupChart::from_matrix(const Mat& m) const {
  GroupPoint g;
  g.matrix = m;
  g.params = params_of(m);
  g.det_abs = std::abs(m.det());
  return g;
}

GroupPoint GroupChart::multiply(const GroupPoint& a, const GroupPoint& b) const {
  return from_matrix(a.matrix * b.matrix);
}

GroupPoint GroupChart::inverse(const GroupPoint& a) const { return from_matrix(a.matrix.inverse()); }

GroupPoint GroupChart::dyadic(double a) const {
  if (kind_ != GroupKind::dyadic1d) throw std::logic_error("not a dyadic1d chart");
  if (a == 0.0) throw std::domain_error("zero is not in the dyadic group");
  return element(ChartParams{sign_of(a), {std::log(std::abs(a)), 0.0}});
}

GroupPoint GroupChart::similitude(double r, double angle) const {
  if (kind_ != GroupKind::similitude2d) throw std::logic_error("not a similitude2d chart");
  if (!(r > 0.0)) throw std::domain_error("similitude scale must be positive");
  return element(ChartParams{1, {std::log(r), wrap_angle(angle)}});
}

GroupPoint GroupChart::shearlet(int eps, double a, double b) const {
  if (kind_ != GroupKind::shearlet2d) throw std::logic_error("not a shearlet2d chart");
  if (!(a > 0.0) || (eps != 1 && eps != -1))
    throw std::domain_error("shearlet parameters need a > 0 and eps = +-1");
  return element(ChartParams{eps, {std::log(a), b / a}});
}

bool GroupChart::in_orbit(const Vec& xi) const { return blind_spot_distance(xi) > 0.0; }

double GroupChart::blind_spot_distance(const Vec& xi) const {
  switch (kind_) {
    case GroupKind::dyadic1d: return std::abs(xi[0]);
    case GroupKind::similitude2d: return xi.norm();
    case GroupKind::shearlet2d: return std::abs(xi[0]);
  }
  return 0.0;
}

double GroupChart::blind_spot_distance(const Box& box) const {
  switch (kind_) {
    case GroupKind::dyadic1d:
    case GroupKind::shearlet2d: {
      const Interval x = box.axis(0);
      return x.contains_zero() ? 0.0 : std::min(std::abs(x.lo), std::abs(x.hi));
    }
    case GroupKind::similitude2d: return box.min_norm();
  }
  return 0.0;
}

double GroupChart::modular_H(const GroupPoint& h) const {
  if (kind_ == GroupKind::shearlet2d) return std::exp(-0.5 * h.params.coords[0]);
  return 1.0;
}

GroupPoint GroupChart::cross_section(const Vec& xi) const {
  if (!in_orbit(xi)) {
    std::string msg = "point is on the blind spot of ";
    msg += to_string(kind_);
    throw std::domain_error(msg);
  }
  switch (kind_) {
    case GroupKind::dyadic1d: return dyadic(xi[0]);
    case GroupKind::similitude2d: return similitude(xi.norm(), std::atan2(xi[1], xi[0]));
    case GroupKind::shearlet2d: {
      const int e = sign_of(xi[0]);
      return shearlet(e, std::abs(xi[0]), e * xi[1]);
    }
  }
  return identity();
}

Interval angular_arc(const Box& box) {
  if (box.axis(0).contains_zero() && box.axis(1).contains_zero()) return {0.0, 2.0 * kPi};
  const double xs[2] = {box.lo[0], box.hi[0]};
  const double ys[2] = {box.lo[1], box.hi[1]};
  const double ref = std::atan2(0.5 * (ys[0] + ys[1]), 0.5 * (xs[0] + xs[1]));
  double lo = kInf, hi = -kInf;
  for (double x : xs) {
    for (double y : ys) {
      double a = std::atan2(y, x);
      while (a - ref > kPi) a -= 2.0 * kPi;
      while (a - ref < -kPi) a += 2.0 * kPi;
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
  }
  return {lo, hi};
}

std::vector<ParamBox> GroupChart::preimage(const Box& xi_box, const Box& eta_box) const {
  std::vector<ParamBox> out;
  switch (kind_) {
    case GroupKind::dyadic1d: {
      const Interval xi = xi_box.axis(0), eta = eta_box.axis(0);
      const Interval axi = abs_range(xi, "frequency region");
      const Interval aeta = abs_range(eta, "window support");
      ParamBox b;
      b.branch = sign_of(eta.lo) * sign_of(xi.lo);
      b.c0 = {std::log(aeta.lo / axi.hi), std::log(aeta.hi / axi.lo)};
      out.push_back(b);
      break;
    }
    case GroupKind::similitude2d: {
      const double xmin = xi_box.min_norm(), emin = eta_box.min_norm();
      if (xmin <= 0.0) throw std::domain_error("frequency region meets the blind spot");
      if (emin <= 0.0) throw std::domain_error("window support meets the blind spot");
      ParamBox b;
      b.c0 = {std::log(emin / xi_box.max_norm()), std::log(eta_box.max_norm() / xmin)};
      b.c1 = preimage_coord1(1, 0.0, xi_box, eta_box);
      out.push_back(b);
      break;
    }
    case GroupKind::shearlet2d: {
      const Interval xi1 = xi_box.axis(0), eta1 = eta_box.axis(0);
      const Interval axi = abs_range(xi1, "frequency region");
      const Interval aeta = abs_range(eta1, "window support");
      ParamBox b;
      b.branch = sign_of(eta1.lo) * sign_of(xi1.lo);
      const Interval a{aeta.lo / axi.hi, aeta.hi / axi.lo};
      b.c0 = {std::log(a.lo), std::log(a.hi)};
      const Interval inv_a = a.reciprocal();
      const Interval inv_sqrt_a{1.0 / std::sqrt(a.hi), 1.0 / std::sqrt(a.lo)};
      const Interval term = eta_box.axis(1) * static_cast<double>(b.branch) * inv_a -
                            xi_box.axis(1) * inv_sqrt_a;
      b.c1 = xi1.reciprocal() * term;
      out.push_back(b);
      break;
    }
  }
  return out;
}

Interval GroupChart::preimage_coord1(int branch, double c0, const Box& xi_box,
                                     const Box& eta_box) const {
  switch (kind_) {
    case GroupKind::dyadic1d: return {0.0, 0.0};
    case GroupKind::similitude2d: {
      const Interval d = angular_arc(eta_box) - angular_arc(xi_box);
      if (d.width() >= 2.0 * kPi) return {0.0, 2.0 * kPi};
      return d;
    }
    case GroupKind::shearlet2d: {
      const double a = std::exp(c0);
      // Frequencies compatible with this scale: eps * a * xi1 in eta1.
      const Interval xi1 = (eta_box.axis(0) * (branch / a)).intersect(xi_box.axis(0));
      if (xi1.empty() || xi1.contains_zero()) return {1.0, -1.0};
      const Interval term =
          eta_box.axis(1) * (branch / a) - xi_box.axis(1) * (1.0 / std::sqrt(a));
      return xi1.reciprocal() * term;
    }
  }
  return {0.0, 0.0};
}

}  // namespace orbitlets
