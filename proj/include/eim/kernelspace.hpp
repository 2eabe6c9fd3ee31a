#pragma once

#include <cstddef>
#include <variant>

#include "eim/kernel.hpp"

namespace eim {

/// Even/odd split of a kernel with the energies of both parts.
template <class K>
struct Split {
  K even;
  K odd;
  double energy_even = 0.0;
  double energy_odd = 0.0;
  /// energy_odd / (energy_odd + energy_even); 0 for the all-zero kernel.
  double beta_sq = 0.0;

  double total_energy() const { return energy_even + energy_odd; }
};

using EvenOddSplit = Split<Kernel2D>;
using EvenOddSplit1D = Split<Kernel1D>;

/// Average of a kernel over the 8 images of the dihedral group acting on
/// centered coordinates (sign flips of x and y, and the x/y swap).
///
/// The 8 orbit values are summed in sorted order, so every member of an
/// orbit receives a bit-identical value and the result is exactly invariant
/// under all 8 maps.
Kernel2D dihedral_average(const Kernel2D& kernel);

EvenOddSplit decompose(const Kernel2D& kernel);

/// Mirror decomposition about the vector center: f_e(x) = (f(x) + f(-x)) / 2.
EvenOddSplit1D decompose1d(const Kernel1D& kernel);

/// Applies one of the 8 dihedral maps: bit 0 flips x, bit 1 flips y, bit 2
/// swaps x and y (applied after the flips).
Kernel2D dihedral_map(const Kernel2D& kernel, unsigned op);

/// magnitude * (beta * odd_unit + sqrt(1 - beta^2) * even_unit).
///
/// Both inputs must be unit-norm and of pure parity within 1e-9
/// (ContractError otherwise); beta outside [0,1] is a RangeError.
Kernel2D mix(const Kernel2D& even_unit, const Kernel2D& odd_unit, double beta,
             double magnitude = 1.0);

// Standard kernels. All are unit energy except OffsetImpulse (a single 1).
namespace kernels {

struct Dc {};
struct GradX {};
struct GradY {};
struct GradTheta {
  double theta = 0.0;  // radians, 0 = +x
};

enum class Direction { Right, Left, Down, Up };
struct OffsetImpulse {
  Direction direction = Direction::Right;
};

enum class Pattern2x2 { Sum, GradX };
/// A 2x2 pattern placed in a 3x3 canvas. Parity 0 occupies the top-left
/// 2x2 corner (x, y in {-1, 0}); parity 1 the bottom-right (x, y in {0, 1}).
struct Embedded2x2 {
  int parity = 0;
  Pattern2x2 pattern = Pattern2x2::GradX;
};

}  // namespace kernels

using StandardKernel = std::variant<kernels::Dc, kernels::GradX, kernels::GradY,
                                    kernels::GradTheta, kernels::OffsetImpulse,
                                    kernels::Embedded2x2>;

/// Supported sizes are 2, 3 and 5. Gradients are linear ramps in the centered
/// coordinate, e.g. columns (-1, 0, 1) for k = 3 and (-2, -1, 0, 1, 2) for
/// k = 5. OffsetImpulse needs an odd size; Embedded2x2 needs k = 3.
Kernel2D standard_kernel(const StandardKernel& kind, std::size_t k);

/// Places a 2x2 kernel in a 3x3 canvas at the corner selected by parity.
Kernel2D embed_2x2(const Kernel2D& kernel2x2, int parity);

}  // namespace eim
