#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <new>
#include <vector>

#include "orbitlets/linalg.hpp"

namespace orbitlets {

using cplx = std::complex<double>;

namespace detail {
void* fft_alloc(std::size_t bytes);
void fft_free(void* p) noexcept;
}  // namespace detail

/// Allocator returning SIMD-aligned storage so that cached FFT plans apply to any buffer.
template <class T>
struct FftAllocator {
  using value_type = T;
  FftAllocator() = default;
  template <class U>
  FftAllocator(const FftAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) {
    if (n > std::numeric_limits<std::size_t>::max() / sizeof(T)) throw std::bad_array_new_length();
    return static_cast<T*>(detail::fft_alloc(n * sizeof(T)));
  }
  void deallocate(T* p, std::size_t) noexcept { detail::fft_free(p); }
  template <class U>
  bool operator==(const FftAllocator<U>&) const noexcept { return true; }
};

using CArray = std::vector<cplx, FftAllocator<cplx>>;

/// Uniform grid on the frequency box center + [-extent, extent)^d with n samples per axis.
///
/// Arrays are stored in DFT order (axis 0 slowest). Frequencies are
/// center + m * dxi and positions m * dx with m = k for k < n/2 and k - n otherwise,
/// where dxi = 2 extent / n and dx = 1 / (2 extent).
/// With a nonzero center, spatial samples carry the unimodular factor exp(-2 pi i <x, center>).
class FrequencyGrid {
 public:
  FrequencyGrid(int dim, int n, double extent);
  FrequencyGrid(int dim, int n, double extent, const Vec& center);

  /// Zero-centered grid whose box holds `support` with the given relative margin.
  static FrequencyGrid enclosing(const Box& support, int n, double margin = 1.25);
  /// Grid centered on the box midpoint with half-width margin * (largest half-side).
  static FrequencyGrid centered_on(const Box& support, int n, double margin = 1.25);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double extent() const { return extent_; }
  const Vec& center() const { return center_; }
  double dxi() const { return 2.0 * extent_ / n_; }
  double dx() const { return 1.0 / (2.0 * extent_); }
  std::size_t size() const { return dim_ == 1 ? std::size_t(n_) : std::size_t(n_) * std::size_t(n_); }
  double freq_volume() const;
  double space_volume() const;

  int signed_index(int k) const { return k < n_ / 2 ? k : k - n_; }
  int array_index(int m) const { return m < 0 ? m + n_ : m; }
  double freq(int axis, int k) const { return center_[axis] + signed_index(k) * dxi(); }
  double pos(int k) const { return signed_index(k) * dx(); }
  Vec freq_point(std::size_t idx) const;
  Vec spatial_point(std::size_t idx) const;
  std::size_t flat(int k0, int k1) const { return std::size_t(k0) * std::size_t(n_) + std::size_t(k1); }

  /// Frequency box covered by the samples.
  Box box() const;
  bool contains(const Box& b) const;
  /// Signed indices m with center + m * dxi inside [lo, hi], clipped to the grid.
  std::pair<int, int> index_range(int axis, const Interval& iv) const;

  bool operator==(const FrequencyGrid& o) const;

 private:
  int dim_;
  int n_;
  double extent_;
  Vec center_;
};

/// Smallest power of two >= x.
inline int next_pow2(double x) {
  int n = 1;
  while (n < x) n *= 2;
  return n;
}

enum class Domain { frequency, spatial };

struct SampledSignal {
  FrequencyGrid grid;
  CArray data;
  Domain domain = Domain::frequency;

  SampledSignal(const FrequencyGrid& g, Domain d) : grid(g), data(g.size()), domain(d) {}
};

/// Samples a frequency-side function on every grid point.
SampledSignal sample_frequency(const FrequencyGrid& grid, const std::function<cplx(const Vec&)>& f);
/// Samples only the grid points inside `support`; all other samples are zero.
SampledSignal sample_frequency(const FrequencyGrid& grid, const Box& support,
                               const std::function<cplx(const Vec&)>& f);

/// In-place unnormalized DFT with kernel exp(sign * 2 pi i k j / n); plans are cached.
void dft_inplace(CArray& data, int dim, int n, int sign);

/// f(x_j) ~ dxi^d * sum_k f_hat(xi_k) exp(2 pi i x_j xi_k).
SampledSignal to_spatial(const SampledSignal& f_hat);
/// f_hat(xi_k) ~ dx^d * sum_j f(x_j) exp(-2 pi i x_j xi_k).
SampledSignal to_frequency(const SampledSignal& f);

/// Riemann-sum L^p norm on the grid; p = infinity gives the largest modulus.
double lp_norm(const SampledSignal& s, double p);
/// Same sum for a raw array with cell volume `cell`.
double lp_norm(const CArray& a, double cell, double p);

}  // namespace orbitlets
