#include "orbitlets/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace orbitlets {

namespace detail {

void* fft_alloc(std::size_t bytes) {
  void* p = fftw_malloc(bytes == 0 ? 1 : bytes);
  if (!p) throw std::bad_alloc();
  return p;
}

void fft_free(void* p) noexcept { fftw_free(p); }

}  // namespace detail

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int dim, int n, int sign) {
    std::lock_guard lock(mu_);
    const auto key = std::make_tuple(dim, n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    // Planning with FFTW_MEASURE overwrites its buffer, so plan on scratch storage.
    const std::size_t len = dim == 1 ? std::size_t(n) : std::size_t(n) * std::size_t(n);
    CArray scratch(len);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int dir = sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan plan = dim == 1 ? fftw_plan_dft_1d(n, buf, buf, dir, FFTW_MEASURE)
                              : fftw_plan_dft_2d(n, n, buf, buf, dir, FFTW_MEASURE);
    if (!plan) throw std::runtime_error("FFT planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

FrequencyGrid::FrequencyGrid(int dim, int n, double extent)
    : FrequencyGrid(dim, n, extent, Vec::zero(dim)) {}

FrequencyGrid::FrequencyGrid(int dim, int n, double extent, const Vec& center)
    : dim_(dim), n_(n), extent_(extent), center_(center) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
  if (!is_power_of_two(n) || n < 2) throw std::invalid_argument("grid size must be a power of two");
  if (!(extent > 0.0)) throw std::invalid_argument("grid extent must be positive");
  if (center.dim() != dim) throw std::invalid_argument("grid center dimension mismatch");
}

FrequencyGrid FrequencyGrid::enclosing(const Box& support, int n, double margin) {
  double m = 0.0;
  for (int i = 0; i < support.dim(); ++i)
    m = std::max({m, std::abs(support.lo[i]), std::abs(support.hi[i])});
  if (m == 0.0) m = 1.0;
  return FrequencyGrid(support.dim(), n, margin * m);
}

FrequencyGrid FrequencyGrid::centered_on(const Box& support, int n, double margin) {
  Vec c = support.lo;
  double half = 0.0;
  for (int i = 0; i < support.dim(); ++i) {
    c[i] = 0.5 * (support.lo[i] + support.hi[i]);
    half = std::max(half, 0.5 * (support.hi[i] - support.lo[i]));
  }
  if (half == 0.0) half = 1.0;
  return FrequencyGrid(support.dim(), n, margin * half, c);
}

double FrequencyGrid::freq_volume() const { return std::pow(dxi(), dim_); }
double FrequencyGrid::space_volume() const { return std::pow(dx(), dim_); }

Vec FrequencyGrid::freq_point(std::size_t idx) const {
  if (dim_ == 1) return Vec(freq(0, int(idx)));
  return Vec(freq(0, int(idx / std::size_t(n_))), freq(1, int(idx % std::size_t(n_))));
}

Vec FrequencyGrid::spatial_point(std::size_t idx) const {
  if (dim_ == 1) return Vec(pos(int(idx)));
  return Vec(pos(int(idx / std::size_t(n_))), pos(int(idx % std::size_t(n_))));
}

Box FrequencyGrid::box() const {
  Box b{center_, center_};
  for (int i = 0; i < dim_; ++i) {
    b.lo[i] -= extent_;
    b.hi[i] += extent_;
  }
  return b;
}

bool FrequencyGrid::contains(const Box& b) const {
  const Box g = box();
  for (int i = 0; i < dim_; ++i)
    if (b.lo[i] < g.lo[i] || b.hi[i] >= g.hi[i]) return false;
  return true;
}

std::pair<int, int> FrequencyGrid::index_range(int axis, const Interval& iv) const {
  const double step = dxi();
  int lo = int(std::ceil((iv.lo - center_[axis]) / step));
  int hi = int(std::floor((iv.hi - center_[axis]) / step));
  lo = std::max(lo, -n_ / 2);
  hi = std::min(hi, n_ / 2 - 1);
  return {lo, hi};
}

bool FrequencyGrid::operator==(const FrequencyGrid& o) const {
  if (dim_ != o.dim_ || n_ != o.n_ || extent_ != o.extent_) return false;
  for (int i = 0; i < dim_; ++i)
    if (center_[i] != o.center_[i]) return false;
  return true;
}

SampledSignal sample_frequency(const FrequencyGrid& grid, const std::function<cplx(const Vec&)>& f) {
  SampledSignal s(grid, Domain::frequency);
  for (std::size_t i = 0; i < s.data.size(); ++i) s.data[i] = f(grid.freq_point(i));
  return s;
}

SampledSignal sample_frequency(const FrequencyGrid& grid, const Box& support,
                               const std::function<cplx(const Vec&)>& f) {
  SampledSignal s(grid, Domain::frequency);
  const auto [a0, b0] = grid.index_range(0, support.axis(0));
  if (grid.dim() == 1) {
    for (int m = a0; m <= b0; ++m) s.data[std::size_t(grid.array_index(m))] = f(Vec(grid.center()[0] + m * grid.dxi()));
    return s;
  }
  const auto [a1, b1] = grid.index_range(1, support.axis(1));
  for (int m0 = a0; m0 <= b0; ++m0) {
    const double x0 = grid.center()[0] + m0 * grid.dxi();
    for (int m1 = a1; m1 <= b1; ++m1) {
      const double x1 = grid.center()[1] + m1 * grid.dxi();
      s.data[grid.flat(grid.array_index(m0), grid.array_index(m1))] = f(Vec(x0, x1));
    }
  }
  return s;
}

void dft_inplace(CArray& data, int dim, int n, int sign) {
  const std::size_t len = dim == 1 ? std::size_t(n) : std::size_t(n) * std::size_t(n);
  if (data.size() != len) throw std::invalid_argument("array size does not match the grid");
  fftw_plan plan = plan_cache().get(dim, n, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

SampledSignal to_spatial(const SampledSignal& f_hat) {
  if (f_hat.domain != Domain::frequency) throw std::invalid_argument("expected frequency samples");
  SampledSignal out = f_hat;
  out.domain = Domain::spatial;
  dft_inplace(out.data, out.grid.dim(), out.grid.n(), +1);
  const double scale = out.grid.freq_volume();
  for (auto& z : out.data) z *= scale;
  return out;
}

SampledSignal to_frequency(const SampledSignal& f) {
  if (f.domain != Domain::spatial) throw std::invalid_argument("expected spatial samples");
  SampledSignal out = f;
  out.domain = Domain::frequency;
  dft_inplace(out.data, out.grid.dim(), out.grid.n(), -1);
  const double scale = out.grid.space_volume();
  for (auto& z : out.data) z *= scale;
  return out;
}

double lp_norm(const CArray& a, double cell, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("L^p exponent must be at least 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& z : a) m = std::max(m, std::abs(z));
    return m;
  }
  double s = 0.0;
  if (p == 1.0) {
    for (const auto& z : a) s += std::abs(z);
    return s * cell;
  }
  if (p == 2.0) {
    for (const auto& z : a) s += std::norm(z);
    return std::sqrt(s * cell);
  }
  for (const auto& z : a) s += std::pow(std::abs(z), p);
  return std::pow(s * cell, 1.0 / p);
}

double lp_norm(const SampledSignal& s, double p) {
  const double cell = s.domain == Domain::spatial ? s.grid.space_volume() : s.grid.freq_volume();
  return lp_norm(s.data, cell, p);
}

}  // namespace orbitlets
