#pragma once

// Test-only reference computations. These deliberately avoid the library's
// code paths (index arithmetic, scatter convolution, sorted orbit sums) so
// they can serve as independent checks.

#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "eim/kernel.hpp"

namespace eim {

// gtest printer for readable failure messages.
inline void PrintTo(const Kernel2D& k, std::ostream* os) {
  *os << "[";
  for (std::size_t r = 0; r < k.size(); ++r) {
    *os << (r ? "; " : "");
    for (std::size_t c = 0; c < k.size(); ++c) *os << (c ? " " : "") << k(r, c);
  }
  *os << "]";
}

}  // namespace eim

namespace eim::oracle {

/// Dihedral average by explicit enumeration of the 8 images of each centered
/// coordinate (coordinates doubled so even sizes stay integral).
inline Kernel2D orbit_average(const Kernel2D& f) {
  const long k = static_cast<long>(f.size());
  std::map<std::pair<long, long>, double> by_coord;  // (2x, 2y) -> value
  for (long r = 0; r < k; ++r)
    for (long c = 0; c < k; ++c)
      by_coord[{2 * c - (k - 1), 2 * r - (k - 1)}] = f(static_cast<std::size_t>(r), static_cast<std::size_t>(c));

  Kernel2D out(f.size());
  for (long r = 0; r < k; ++r) {
    for (long c = 0; c < k; ++c) {
      const long x = 2 * c - (k - 1), y = 2 * r - (k - 1);
      double s = 0.0;
      for (long sx : {-1L, 1L})
        for (long sy : {-1L, 1L}) s += by_coord.at({sx * x, sy * y}) + by_coord.at({sy * y, sx * x});
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = s / 8.0;
    }
  }
  return out;
}

/// Direct 2D DCT-II basis value at pixel (x, y).
inline double dct_value(std::size_t k, std::size_t u, std::size_t v, std::size_t x, std::size_t y) {
  const double n = static_cast<double>(k);
  const double au = u == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
  const double av = v == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
  return au * av * std::cos(std::numbers::pi * (2.0 * x + 1.0) * u / (2.0 * n)) *
         std::cos(std::numbers::pi * (2.0 * y + 1.0) * v / (2.0 * n));
}

inline std::int64_t binomial(int n, int k) {
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Number of integer points with x^2 + y^2 <= r^2.
inline long lattice_points_in_disk(long r) {
  long n = 0;
  for (long x = -r; x <= r; ++x)
    for (long y = -r; y <= r; ++y)
      if (x * x + y * y <= r * r) ++n;
  return n;
}

/// Gather-form same-size convolution on a dense grid, out(p) = sum_d K(d) f(p - d).
inline std::vector<double> conv2d_gather(const std::vector<double>& f, long w, long h,
                                         const Kernel2D& K) {
  const long k = static_cast<long>(K.size()), c = (k - 1) / 2;
  std::vector<double> out(static_cast<std::size_t>(w * h), 0.0);
  for (long y = 0; y < h; ++y)
    for (long x = 0; x < w; ++x) {
      double s = 0.0;
      for (long dy = -c; dy <= c; ++dy)
        for (long dx = -c; dx <= c; ++dx) {
          const long sx = x - dx, sy = y - dy;
          if (sx < 0 || sy < 0 || sx >= w || sy >= h) continue;
          s += K(static_cast<std::size_t>(dy + c), static_cast<std::size_t>(dx + c)) *
               f[static_cast<std::size_t>(sy * w + sx)];
        }
      out[static_cast<std::size_t>(y * w + x)] = s;
    }
  return out;
}

inline Kernel2D random_kernel(std::size_t k, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<double> v(k * k);
  for (double& x : v) x = normal(rng);
  return Kernel2D(k, std::move(v));
}

}  // namespace eim::oracle
