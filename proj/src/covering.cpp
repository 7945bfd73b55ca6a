#include "orbitlets/covering.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace orbitlets {

std::ostream& operator<<(std::ostream& os, const LatticeIndex& i) {
  return os << '(' << i.scale << ',' << i.shear << ',' << (i.branch > 0 ? '+' : '-') << ')';
}

std::string to_string(const LatticeIndex& i) {
  std::ostringstream os;
  os << i;
  return os.str();
}

// ---------------------------------------------------------------------------
// Well-spread families

WellSpreadFamily::WellSpreadFamily(GroupChart chart) : chart_(chart) {}

GroupPoint WellSpreadFamily::point(const LatticeIndex& i) const {
  switch (chart_.kind()) {
    case GroupKind::dyadic1d:
      return chart_.element(ChartParams{i.branch, {-i.scale * kLn2, 0.0}});
    case GroupKind::similitude2d:
      return chart_.element(ChartParams{1, {-i.scale * kLn2, 0.0}});
    case GroupKind::shearlet2d: {
      // A_j S_k = [[2^j, k 2^j], [0, 2^{j/2}]], so b/a = k.
      return chart_.element(ChartParams{i.branch, {i.scale * kLn2, double(i.shear)}});
    }
  }
  throw std::logic_error("unknown chart");
}

ChartParams WellSpreadFamily::cell_params(const LatticeIndex& i, double u0, double u1) const {
  switch (chart_.kind()) {
    case GroupKind::dyadic1d:
      return ChartParams{i.branch, {(u0 - i.scale) * kLn2, 0.0}};
    case GroupKind::similitude2d:
      return ChartParams{1, {(u0 - i.scale) * kLn2, 2.0 * kPi * u1}};
    case GroupKind::shearlet2d: {
      const double tau = u0 * kLn2;
      return ChartParams{i.branch, {i.scale * kLn2 + tau, (i.shear + u1) * std::exp(-0.5 * tau)}};
    }
  }
  throw std::logic_error("unknown chart");
}

double WellSpreadFamily::cell_density(double u0) const {
  switch (chart_.kind()) {
    case GroupKind::dyadic1d: return kLn2;
    case GroupKind::similitude2d: return 2.0 * kPi * kLn2;
    case GroupKind::shearlet2d: return kLn2 * std::exp(-0.5 * u0 * kLn2);
  }
  return 0.0;
}

double WellSpreadFamily::cell_measure() const {
  switch (chart_.kind()) {
    case GroupKind::dyadic1d: return kLn2;
    case GroupKind::similitude2d: return 2.0 * kPi * kLn2;
    case GroupKind::shearlet2d: return 2.0 * (1.0 - std::sqrt(0.5));
  }
  return 0.0;
}

LatticeIndex WellSpreadFamily::cell_of(const ChartParams& p) const {
  LatticeIndex i;
  switch (chart_.kind()) {
    case GroupKind::dyadic1d:
      i.branch = p.branch;
      i.scale = -int(std::floor(p.coords[0] / kLn2));
      break;
    case GroupKind::similitude2d:
      i.scale = -int(std::floor(p.coords[0] / kLn2));
      break;
    case GroupKind::shearlet2d: {
      i.branch = p.branch;
      i.scale = int(std::floor(p.coords[0] / kLn2));
      const double tau = p.coords[0] - i.scale * kLn2;
      i.shear = int(std::floor(p.coords[1] * std::exp(0.5 * tau)));
      break;
    }
  }
  return i;
}

std::array<double, 2> WellSpreadFamily::local_coords(const LatticeIndex& i, const ChartParams& p) const {
  switch (chart_.kind()) {
    case GroupKind::dyadic1d: return {p.coords[0] / kLn2 + i.scale, 0.0};
    case GroupKind::similitude2d: {
      double u1 = p.coords[1] / (2.0 * kPi);
      u1 -= std::floor(u1);
      return {p.coords[0] / kLn2 + i.scale, u1};
    }
    case GroupKind::shearlet2d: {
      const double tau = p.coords[0] - i.scale * kLn2;
      return {tau / kLn2, p.coords[1] * std::exp(0.5 * tau) - i.shear};
    }
  }
  return {0.0, 0.0};
}

std::vector<LatticeIndex> WellSpreadFamily::cells_meeting(const ParamBox& box) const {
  std::vector<LatticeIndex> out;
  if (box.c0.empty() || box.c1.empty()) return out;
  if (chart_.kind() != GroupKind::shearlet2d) {
    const int k_lo = -int(std::floor(box.c0.hi / kLn2));
    const int k_hi = -int(std::floor(box.c0.lo / kLn2));
    const int branch = chart_.kind() == GroupKind::dyadic1d ? box.branch : 1;
    for (int k = k_lo; k <= k_hi; ++k) out.push_back(LatticeIndex{k, 0, branch});
    return out;
  }
  const int j_lo = int(std::floor(box.c0.lo / kLn2));
  const int j_hi = int(std::floor(box.c0.hi / kLn2));
  const double r2 = std::sqrt(2.0);
  const int k_lo = int(std::floor(std::min(box.c1.lo, box.c1.lo * r2)));
  const int k_hi = int(std::floor(std::max(box.c1.hi, box.c1.hi * r2)));
  for (int j = j_lo; j <= j_hi; ++j)
    for (int k = k_lo; k <= k_hi; ++k) out.push_back(LatticeIndex{j, k, box.branch});
  return out;
}

std::vector<LatticeIndex> WellSpreadFamily::enumerate(const IndexWindow& w) const {
  std::vector<LatticeIndex> out;
  const int shear = uses_shear() ? w.shear_radius : 0;
  for (int s = w.scale_lo; s <= w.scale_hi; ++s)
    for (int k = -shear; k <= shear; ++k)
      for (int b : chart_.branches()) out.push_back(LatticeIndex{s, k, b});
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Base sets

BaseSet BaseSet::interval(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("interval needs lo < hi");
  BaseSet s;
  s.kind_ = Kind::interval;
  s.lo_ = lo;
  s.hi_ = hi;
  s.box_ = Box{Vec(lo), Vec(hi)};
  return s;
}

BaseSet BaseSet::symmetric_interval(double lo, double hi) {
  if (!(0.0 <= lo && lo < hi)) throw std::invalid_argument("symmetric interval needs 0 <= lo < hi");
  BaseSet s;
  s.kind_ = Kind::symmetric_interval;
  s.lo_ = lo;
  s.hi_ = hi;
  s.box_ = Box{Vec(-hi), Vec(hi)};
  return s;
}

BaseSet BaseSet::annulus(double lo, double hi) {
  if (!(0.0 <= lo && lo < hi)) throw std::invalid_argument("annulus needs 0 <= inner < outer");
  BaseSet s;
  s.kind_ = Kind::annulus;
  s.lo_ = lo;
  s.hi_ = hi;
  s.box_ = Box{Vec(-hi, -hi), Vec(hi, hi)};
  return s;
}

BaseSet BaseSet::box(const Vec& lo, const Vec& hi) {
  if (lo.dim() != 2 || hi.dim() != 2 || !(lo[0] < hi[0] && lo[1] < hi[1]))
    throw std::invalid_argument("box needs two-dimensional corners with lo < hi");
  BaseSet s;
  s.kind_ = Kind::box;
  s.box_ = Box{lo, hi};
  return s;
}

bool BaseSet::contains(const Vec& x) const {
  switch (kind_) {
    case Kind::interval: return lo_ < x[0] && x[0] < hi_;
    case Kind::symmetric_interval: {
      const double a = std::abs(x[0]);
      return lo_ < a && a < hi_;
    }
    case Kind::annulus: {
      const double r = x.norm();
      return lo_ < r && r < hi_;
    }
    case Kind::box:
      return box_.lo[0] < x[0] && x[0] < box_.hi[0] && box_.lo[1] < x[1] && x[1] < box_.hi[1];
  }
  return false;
}

Box BaseSet::bounding_box() const { return box_; }

bool BaseSet::compactly_inside(const BaseSet& outer) const {
  if (dim() != outer.dim()) return false;
  auto nested = [](double a, double b, double lo, double hi) { return lo < a && b < hi; };
  switch (outer.kind_) {
    case Kind::interval:
      return kind_ == Kind::interval && nested(lo_, hi_, outer.lo_, outer.hi_);
    case Kind::symmetric_interval:
      if (kind_ == Kind::symmetric_interval) return nested(lo_, hi_, outer.lo_, outer.hi_);
      if (kind_ == Kind::interval)
        return nested(lo_, hi_, outer.lo_, outer.hi_) || nested(lo_, hi_, -outer.hi_, -outer.lo_);
      return false;
    case Kind::annulus:
      if (kind_ == Kind::annulus) return nested(lo_, hi_, outer.lo_, outer.hi_);
      if (kind_ == Kind::box) return box_.min_norm() > outer.lo_ && box_.max_norm() < outer.hi_;
      return false;
    case Kind::box:
      if (kind_ == Kind::box || kind_ == Kind::annulus) {
        const Box& b = box_;
        return nested(b.lo[0], b.hi[0], outer.box_.lo[0], outer.box_.hi[0]) &&
               nested(b.lo[1], b.hi[1], outer.box_.lo[1], outer.box_.hi[1]);
      }
      return false;
  }
  return false;
}

std::vector<Vec> BaseSet::sample(int per_axis) const {
  std::vector<Vec> out;
  auto mid = [per_axis](double a, double b, int k) { return a + (b - a) * (k + 0.5) / per_axis; };
  switch (kind_) {
    case Kind::interval:
      for (int k = 0; k < per_axis; ++k) out.emplace_back(mid(lo_, hi_, k));
      break;
    case Kind::symmetric_interval:
      for (int k = 0; k < per_axis; ++k) {
        out.emplace_back(mid(lo_, hi_, k));
        out.emplace_back(-mid(lo_, hi_, k));
      }
      break;
    case Kind::annulus:
      for (int k = 0; k < per_axis; ++k) {
        const double r = mid(lo_, hi_, k);
        for (int m = 0; m < 4 * per_axis; ++m) {
          const double a = 2.0 * kPi * (m + 0.5) / (4 * per_axis);
          out.emplace_back(r * std::cos(a), r * std::sin(a));
        }
      }
      break;
    case Kind::box:
      for (int k = 0; k < per_axis; ++k)
        for (int m = 0; m < per_axis; ++m)
          out.emplace_back(mid(box_.lo[0], box_.hi[0], k), mid(box_.lo[1], box_.hi[1], m));
      break;
  }
  return out;
}

std::string BaseSet::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::interval: os << "interval(" << lo_ << ", " << hi_ << ")"; break;
    case Kind::symmetric_interval: os << "symmetric_interval(" << lo_ << ", " << hi_ << ")"; break;
    case Kind::annulus: os << "annulus(" << lo_ << ", " << hi_ << ")"; break;
    case Kind::box: os << "box(" << box_.lo << ", " << box_.hi << ")"; break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Intersections

namespace {

// Open intervals; endpoints that agree up to rounding count as touching, not overlapping.
bool open_overlap(double a_lo, double a_hi, double b_lo, double b_hi) {
  const double scale = std::max({std::abs(a_lo), std::abs(a_hi), std::abs(b_lo), std::abs(b_hi)});
  return std::min(a_hi, b_hi) - std::max(a_lo, b_lo) > 1e-12 * scale;
}

std::vector<Interval> interval_pieces(const BaseSet& q) {
  if (q.kind() == BaseSet::Kind::interval) return {{q.lo(), q.hi()}};
  return {{q.lo(), q.hi()}, {-q.hi(), -q.lo()}};
}

/// Projection of a convex polygon onto an axis.
Interval project(const std::array<Vec, 4>& poly, const Vec& axis) {
  double lo = kInf, hi = -kInf;
  for (const auto& p : poly) {
    const double v = p.dot(axis);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

std::array<Vec, 4> box_corners(const Box& b) {
  return {Vec(b.lo[0], b.lo[1]), Vec(b.hi[0], b.lo[1]), Vec(b.hi[0], b.hi[1]), Vec(b.lo[0], b.hi[1])};
}

/// Separating-axis test for open convex quadrilaterals.
bool polygons_overlap(const std::array<Vec, 4>& a, const std::array<Vec, 4>& b) {
  for (const auto* poly : {&a, &b}) {
    for (std::size_t e = 0; e < 4; ++e) {
      const Vec d = (*poly)[(e + 1) % 4] - (*poly)[e];
      const Vec axis(-d[1], d[0]);
      if (axis.norm() == 0.0) continue;
      const Interval pa = project(a, axis), pb = project(b, axis);
      if (!open_overlap(pa.lo, pa.hi, pb.lo, pb.hi)) return false;
    }
  }
  return true;
}

bool is_similarity(const Mat& m, double* scale) {
  const auto sv = m.singular_values();
  *scale = sv[0];
  return std::abs(sv[0] - sv[1]) <= 1e-12 * sv[0];
}

/// Q meets M Q + c, by sampling both sets.
bool sampled_overlap(const BaseSet& q, const Mat& m, const Vec& c) {
  const auto cloud = q.sample(q.dim() == 1 ? 256 : 64);
  for (const auto& p : cloud)
    if (q.contains(m * p + c)) return true;
  const Mat mi = m.inverse();
  for (const auto& p : cloud)
    if (q.contains(mi * (p - c))) return true;
  return false;
}

}  // namespace

Covering::Covering(BaseSet q, std::vector<Member> members) : q_(std::move(q)), members_(std::move(members)) {
  for (std::size_t m = 0; m < members_.size(); ++m) {
    if (members_[m].t.dim() != q_.dim()) throw std::invalid_argument("member dimension does not match Q");
    if (!lookup_.emplace(members_[m].index, int(m)).second)
      throw std::invalid_argument("duplicate covering index " + to_string(members_[m].index));
  }
}

int Covering::find(const LatticeIndex& i) const {
  const auto it = lookup_.find(i);
  return it == lookup_.end() ? -1 : it->second;
}

bool Covering::member_contains(std::size_t m, const Vec& xi) const {
  const auto& mem = members_[m];
  return q_.contains(mem.t.inverse() * (xi - mem.b));
}

bool Covering::intersects(std::size_t m, std::size_t n, IntersectionMethod* method) const {
  if (method) *method = IntersectionMethod::analytic;
  if (m == n) return true;
  const Mat ti = members_[m].t.inverse();
  const Mat rel = ti * members_[n].t;
  const Vec off = ti * (members_[n].b - members_[m].b);
  switch (q_.kind()) {
    case BaseSet::Kind::interval:
    case BaseSet::Kind::symmetric_interval: {
      for (const auto& a : interval_pieces(q_))
        for (const auto& b : interval_pieces(q_)) {
          const Interval img = Interval::hull(rel(0, 0) * b.lo + off[0], rel(0, 0) * b.hi + off[0]);
          if (open_overlap(a.lo, a.hi, img.lo, img.hi)) return true;
        }
      return false;
    }
    case BaseSet::Kind::annulus: {
      double s = 1.0;
      if (is_similarity(rel, &s) && off.norm() == 0.0) return open_overlap(q_.lo(), q_.hi(), s * q_.lo(), s * q_.hi());
      if (method) *method = IntersectionMethod::approximate;
      return sampled_overlap(q_, rel, off);
    }
    case BaseSet::Kind::box: {
      const auto a = box_corners(q_.corners());
      auto b = box_corners(q_.corners());
      for (auto& p : b) p = rel * p + off;
      return polygons_overlap(a, b);
    }
  }
  return false;
}

double Covering::structure_constant(std::size_t m, std::size_t n) const {
  return (members_[m].t.inverse() * members_[n].t).spectral_norm();
}

Covering Covering::with_base(const BaseSet& p) const { return Covering(p, members_); }

// ---------------------------------------------------------------------------
// Induced coverings

namespace {

double orbit_margin(const GroupChart& chart, const BaseSet& q) {
  if (q.kind() == BaseSet::Kind::annulus && chart.kind() == GroupKind::similitude2d) return q.lo();
  if (q.kind() == BaseSet::Kind::symmetric_interval && chart.kind() == GroupKind::dyadic1d) return q.lo();
  return chart.blind_spot_distance(q.bounding_box());
}

Box image_box(const Mat& t, const Vec& b, const Box& box) {
  if (box.dim() == 1) {
    const Interval iv = Interval::hull(t(0, 0) * box.lo[0], t(0, 0) * box.hi[0]);
    return Box{Vec(iv.lo + b[0]), Vec(iv.hi + b[0])};
  }
  const auto corners = box_corners(box);
  Box out{t * corners[0] + b, t * corners[0] + b};
  for (const auto& c : corners) {
    const Vec p = t * c + b;
    out = out.unite(Box{p, p});
  }
  return out;
}

}  // namespace

InducedCovering::InducedCovering(WellSpreadFamily family, BaseSet q, const IndexWindow& window)
    : family_(std::move(family)), cover_(q, {}) {
  const GroupChart& chart = family_.chart();
  if (q.dim() != chart.dim()) throw std::invalid_argument("base set dimension does not match the chart");
  if (!(orbit_margin(chart, q) > 0.0))
    throw std::domain_error("closure of " + q.describe() + " meets the blind spot of " +
                            std::string(to_string(chart.kind())));
  std::vector<Covering::Member> members;
  for (const auto& i : family_.enumerate(window)) {
    const GroupPoint h = family_.point(i);
    members.push_back({i, h.matrix.transpose().inverse(), Vec::zero(chart.dim())});
  }
  cover_ = Covering(q, std::move(members));
}

bool InducedCovering::contains(const LatticeIndex& i, const Vec& xi) const {
  const GroupPoint h = family_.point(i);
  return base().contains(family_.chart().dual_action(h, xi));
}

Box InducedCovering::member_box(const LatticeIndex& i) const {
  const GroupPoint h = family_.point(i);
  const Mat t = h.matrix.transpose().inverse();
  if (base().kind() == BaseSet::Kind::annulus) {
    double s = 1.0;
    if (is_similarity(t, &s)) {
      const double r = s * base().hi();
      return Box{Vec(-r, -r), Vec(r, r)};
    }
  }
  return image_box(t, Vec::zero(t.dim()), base().bounding_box());
}

std::vector<LatticeIndex> InducedCovering::indices_meeting(const Box& region) const {
  std::vector<LatticeIndex> out;
  for (const auto& m : cover_.members())
    if (member_box(m.index).overlaps(region)) out.push_back(m.index);
  return out;
}

void InducedCovering::require_coverage(const Box& region, int samples_per_axis) const {
  const GroupChart& chart = family_.chart();
  const int d = region.dim();
  const int n1 = d == 1 ? 1 : samples_per_axis;
  std::vector<Box> boxes;
  for (const auto& m : cover_.members()) boxes.push_back(member_box(m.index));
  for (int a = 0; a < samples_per_axis; ++a) {
    for (int b = 0; b < n1; ++b) {
      Vec xi = region.lo;
      xi[0] = region.lo[0] + (region.hi[0] - region.lo[0]) * (a + 0.5) / samples_per_axis;
      if (d == 2) xi[1] = region.lo[1] + (region.hi[1] - region.lo[1]) * (b + 0.5) / n1;
      if (!chart.in_orbit(xi)) continue;
      bool covered = false;
      for (std::size_t m = 0; m < boxes.size() && !covered; ++m)
        covered = boxes[m].contains(xi) && cover_.member_contains(m, xi);
      if (!covered) {
        std::ostringstream os;
        os << "frequency sample " << xi << " is not covered by any member of the index window";
        throw std::domain_error(os.str());
      }
    }
  }
}

Covering affine_translates(const BaseSet& q, int first, int last) {
  if (q.dim() != 1) throw std::invalid_argument("affine translates are one-dimensional");
  std::vector<Covering::Member> members;
  for (int i = first; i <= last; ++i) members.push_back({LatticeIndex{i, 0, 1}, Mat(1.0), Vec(double(i))});
  return Covering(q, std::move(members));
}

// ---------------------------------------------------------------------------
// Clusters and certificates

bool ClusterTable::symmetric() const {
  for (std::size_t m = 0; m < neighbors.size(); ++m)
    for (int n : neighbors[m]) {
      const auto& back = neighbors[std::size_t(n)];
      if (!std::binary_search(back.begin(), back.end(), int(m))) return false;
    }
  return true;
}

bool ClusterTable::reflexive() const {
  for (std::size_t m = 0; m < neighbors.size(); ++m)
    if (!std::binary_search(neighbors[m].begin(), neighbors[m].end(), int(m))) return false;
  return true;
}

ClusterTable clusters(const Covering& c) {
  ClusterTable t;
  t.neighbors.assign(c.size(), {});
  for (std::size_t m = 0; m < c.size(); ++m) {
    t.neighbors[m].push_back(int(m));
    for (std::size_t n = m + 1; n < c.size(); ++n) {
      IntersectionMethod how;
      if (!c.intersects(m, n, &how)) continue;
      if (how == IntersectionMethod::approximate) t.exact = false;
      t.neighbors[m].push_back(int(n));
      t.neighbors[n].push_back(int(m));
      t.max_structure_constant =
          std::max({t.max_structure_constant, c.structure_constant(m, n), c.structure_constant(n, m)});
    }
  }
  for (auto& nb : t.neighbors) {
    std::sort(nb.begin(), nb.end());
    t.max_cluster = std::max(t.max_cluster, nb.size());
  }
  return t;
}

StructureCertificate structured_check(const InducedCovering& cover, const BaseSet& p, const Box& region,
                                      int samples_per_axis) {
  StructureCertificate cert;
  std::ostringstream detail;
  if (!p.compactly_inside(cover.base())) {
    detail << p.describe() << " is not compactly inside " << cover.base().describe();
    cert.detail = detail.str();
    return cert;
  }
  const ClusterTable t = clusters(cover.covering());
  cert.C = t.max_structure_constant;
  cert.n0 = t.max_cluster;
  cert.exact = t.exact;
  try {
    cover.require_coverage(region, samples_per_axis);
    // Same index list, smaller base set.
    const Covering pc = cover.covering().with_base(p);
    const int d = region.dim();
    const int n1 = d == 1 ? 1 : samples_per_axis;
    for (int a = 0; a < samples_per_axis; ++a)
      for (int b = 0; b < n1; ++b) {
        Vec xi = region.lo;
        xi[0] = region.lo[0] + (region.hi[0] - region.lo[0]) * (a + 0.5) / samples_per_axis;
        if (d == 2) xi[1] = region.lo[1] + (region.hi[1] - region.lo[1]) * (b + 0.5) / n1;
        if (!cover.family().chart().in_orbit(xi)) continue;
        bool covered = false;
        for (std::size_t m = 0; m < pc.size() && !covered; ++m) covered = pc.member_contains(m, xi);
        if (!covered) {
          std::ostringstream os;
          os << "frequency sample " << xi << " is not covered by the P-family";
          throw std::domain_error(os.str());
        }
      }
  } catch (const std::domain_error& e) {
    cert.detail = e.what();
    return cert;
  }
  cert.is_structured = true;
  detail << "n0 = " << cert.n0 << ", C = " << cert.C << (cert.exact ? "" : " (approximate intersections)");
  cert.detail = detail.str();
  return cert;
}

}  // namespace orbitlets
