#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "squeezest/errors.hpp"

namespace squeezest {

using complex = std::complex<double>;

// Uniform grid lo, lo + h, ..., hi with n points (both ends included).
struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 2;

  double step() const { return (hi - lo) / static_cast<double>(n - 1); }
  double at(std::size_t i) const {
    return i + 1 == n ? hi : lo + static_cast<double>(i) * step();
  }
  bool contains(double x) const { return x >= lo && x <= hi; }

  // Index of the grid point closest to x (clamped to the grid).
  std::size_t nearest(double x) const {
    if (x <= lo) return 0;
    if (x >= hi) return n - 1;
    return static_cast<std::size_t>(std::lround((x - lo) / step()));
  }

  std::vector<double> points() const {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = at(i);
    return out;
  }

  void validate(const std::string& what) const {
    if (!std::isfinite(lo) || !std::isfinite(hi))
      throw ValidationError(what + ": grid bounds must be finite");
    if (n < 2) throw ValidationError(what + ": grid needs at least 2 points");
    if (!(lo < hi)) throw ValidationError(what + ": grid requires lo < hi");
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

inline GridSpec symmetric_grid(double half_width, std::size_t n) {
  return GridSpec{-half_width, half_width, n};
}

template <typename T>
T trapezoid(std::span<const T> y, double h) {
  if (y.size() < 2) return T{};
  T sum = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) sum += y[i];
  return sum * h;
}

template <typename T>
T trapezoid(const std::vector<T>& y, double h) {
  return trapezoid(std::span<const T>(y), h);
}

// Four-point Lagrange interpolation of uniformly sampled data. Points outside
// [lo, hi] evaluate to zero: sampled functions are assumed to have their
// support inside the grid.
template <typename T>
T cubic_interpolate(const GridSpec& grid, std::span<const T> values, double x) {
  if (!(x >= grid.lo && x <= grid.hi)) return T{};
  const double h = grid.step();
  const double s = (x - grid.lo) / h;
  const auto n = static_cast<long>(grid.n);
  long i0 = static_cast<long>(std::floor(s)) - 1;
  i0 = std::clamp(i0, 0L, std::max(0L, n - 4));
  if (n < 4) {
    // Linear fallback for tiny grids.
    const long i = std::clamp(static_cast<long>(std::floor(s)), 0L, n - 2);
    const double f = s - static_cast<double>(i);
    return values[i] * (1.0 - f) + values[i + 1] * f;
  }
  const double u = s - static_cast<double>(i0);  // position relative to node i0
  const double w0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
  const double w1 = u * (u - 2.0) * (u - 3.0) / 2.0;
  const double w2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
  const double w3 = u * (u - 1.0) * (u - 2.0) / 6.0;
  return w0 * values[i0] + w1 * values[i0 + 1] + w2 * values[i0 + 2] +
         w3 * values[i0 + 3];
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace squeezest
