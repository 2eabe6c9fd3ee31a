#include "eim/kernelspace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "eim/error.hpp"

namespace eim {
namespace {

constexpr double kUnitTolerance = 1e-9;

template <class K>
Split<K> finish_split(K even, K odd) {
  Split<K> s{std::move(even), std::move(odd)};
  s.energy_even = s.even.energy();
  s.energy_odd = s.odd.energy();
  const double total = s.energy_even + s.energy_odd;
  s.beta_sq = total > 0.0 ? s.energy_odd / total : 0.0;
  return s;
}

Kernel2D normalized(Kernel2D k) {
  const double n = k.norm();
  return k * (1.0 / n);
}

Kernel2D ramp_x(std::size_t k) {
  Kernel2D out(k);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c) out(r, c) = out.centered(c);
  return normalized(std::move(out));
}

}  // namespace

Kernel2D dihedral_map(const Kernel2D& kernel, unsigned op) {
  const std::size_t k = kernel.size();
  Kernel2D out(k);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t sr = (op & 2u) ? k - 1 - r : r;
      std::size_t sc = (op & 1u) ? k - 1 - c : c;
      if (op & 4u) std::swap(sr, sc);
      out(r, c) = kernel(sr, sc);
    }
  }
  return out;
}

Kernel2D dihedral_average(const Kernel2D& kernel) {
  const std::size_t k = kernel.size();
  if (k == 0) throw ShapeError("dihedral_average: empty kernel");
  Kernel2D out(k);
  std::array<double, 8> orbit{};
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t n = 0;
      for (int sx = 0; sx < 2; ++sx) {
        for (int sy = 0; sy < 2; ++sy) {
          const std::size_t col = sx ? k - 1 - c : c;
          const std::size_t row = sy ? k - 1 - r : r;
          orbit[n++] = kernel(row, col);  // f(sx x, sy y)
          orbit[n++] = kernel(col, row);  // f(sy y, sx x)
        }
      }
      // Mirrored pairs of the sorted orbit cancel exactly for odd kernels.
      std::sort(orbit.begin(), orbit.end());
      const double p0 = orbit[0] + orbit[7], p1 = orbit[1] + orbit[6];
      const double p2 = orbit[2] + orbit[5], p3 = orbit[3] + orbit[4];
      out(r, c) = ((p0 + p3) + (p1 + p2)) / 8.0;
    }
  }
  return out;
}

EvenOddSplit decompose(const Kernel2D& kernel) {
  Kernel2D even = dihedral_average(kernel);
  Kernel2D odd = kernel - even;
  return finish_split(std::move(even), std::move(odd));
}

EvenOddSplit1D decompose1d(const Kernel1D& kernel) {
  const std::size_t n = kernel.size();
  if (n == 0) throw ShapeError("decompose1d: empty kernel");
  std::vector<double> even(n), odd(n);
  for (std::size_t i = 0; i < n; ++i) {
    even[i] = 0.5 * (kernel[i] + kernel[n - 1 - i]);
    odd[i] = kernel[i] - even[i];
  }
  return finish_split(Kernel1D(std::move(even)), Kernel1D(std::move(odd)));
}

Kernel2D mix(const Kernel2D& even_unit, const Kernel2D& odd_unit, double beta,
             double magnitude) {
  if (even_unit.size() != odd_unit.size()) throw ShapeError("mix: kernel size mismatch");
  if (!(beta >= 0.0 && beta <= 1.0)) throw RangeError("mix: beta must lie in [0, 1]");
  if (!(magnitude > 0.0) || !std::isfinite(magnitude))
    throw RangeError("mix: magnitude must be positive");

  if (std::abs(even_unit.norm() - 1.0) > kUnitTolerance)
    throw ContractError("mix: even component is not unit norm");
  if (std::abs(odd_unit.norm() - 1.0) > kUnitTolerance)
    throw ContractError("mix: odd component is not unit norm");
  if (decompose(even_unit).odd.norm() > kUnitTolerance)
    throw ContractError("mix: even component has an odd part");
  if (decompose(odd_unit).even.norm() > kUnitTolerance)
    throw ContractError("mix: odd component has an even part");

  const double a = magnitude * beta;
  const double b = magnitude * std::sqrt(1.0 - beta * beta);
  return odd_unit * a + even_unit * b;
}

Kernel2D embed_2x2(const Kernel2D& kernel2x2, int parity) {
  if (kernel2x2.size() != 2) throw ShapeError("embed_2x2: expected a 2x2 kernel");
  if (parity != 0 && parity != 1) throw RangeError("embed_2x2: parity must be 0 or 1");
  Kernel2D out(3);
  const std::size_t off = parity == 0 ? 0 : 1;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) out(r + off, c + off) = kernel2x2(r, c);
  return out;
}

Kernel2D standard_kernel(const StandardKernel& kind, std::size_t k) {
  if (k != 2 && k != 3 && k != 5)
    throw RangeError("standard_kernel: unsupported size " + std::to_string(k));

  struct Visitor {
    std::size_t k;
    Kernel2D operator()(kernels::Dc) const {
      return Kernel2D(k, std::vector<double>(k * k, 1.0 / static_cast<double>(k)));
    }
    Kernel2D operator()(kernels::GradX) const { return ramp_x(k); }
    Kernel2D operator()(kernels::GradY) const { return ramp_x(k).transposed(); }
    Kernel2D operator()(kernels::GradTheta g) const {
      Kernel2D gx = ramp_x(k);
      Kernel2D gy = gx.transposed();
      return normalized(gx * std::cos(g.theta) + gy * std::sin(g.theta));
    }
    Kernel2D operator()(kernels::OffsetImpulse o) const {
      if (k % 2 == 0) throw RangeError("offset impulse needs an odd kernel size");
      const std::size_t c = (k - 1) / 2;
      Kernel2D out(k);
      switch (o.direction) {
        case kernels::Direction::Right: out(c, c + 1) = 1.0; break;
        case kernels::Direction::Left: out(c, c - 1) = 1.0; break;
        case kernels::Direction::Down: out(c + 1, c) = 1.0; break;
        case kernels::Direction::Up: out(c - 1, c) = 1.0; break;
      }
      return out;
    }
    Kernel2D operator()(kernels::Embedded2x2 e) const {
      if (k != 3) throw RangeError("embedded 2x2 kernels live in a 3x3 canvas");
      const Kernel2D pattern = e.pattern == kernels::Pattern2x2::Sum
                                   ? Kernel2D::from_rows({{0.5, 0.5}, {0.5, 0.5}})
                                   : Kernel2D::from_rows({{-0.5, 0.5}, {-0.5, 0.5}});
      return embed_2x2(pattern, e.parity);
    }
  };
  return std::visit(Visitor{k}, kind);
}

}  // namespace eim
