#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "eim/kernel.hpp"

namespace eim {

enum class SymClass { Even, Odd, Mixed };

std::string_view to_string(SymClass s);

/// Parity class of DCT basis (u, v): Odd if either wave number is odd, Even
/// on the even diagonal, Mixed for even but unequal wave numbers.
SymClass classify_symmetry(std::size_t u, std::size_t v);

struct BasisItem {
  std::size_t u = 0;  // horizontal wave number (varies along x)
  std::size_t v = 0;  // vertical wave number (varies along y)
  Kernel2D basis;
  SymClass sym_class = SymClass::Even;
};

/// Orthonormal DCT-II tensor basis of size k, ordered low frequency first:
/// by u+v, then |u-v|, then u. For k = 3 this gives
/// (0,0); (0,1),(1,0); (1,1),(0,2),(2,0); (1,2),(2,1); (2,2).
class DctBasis {
 public:
  /// Throws RangeError unless 1 <= k <= 16.
  explicit DctBasis(std::size_t k);

  std::size_t size() const { return k_; }
  std::size_t count() const { return items_.size(); }
  const BasisItem& operator[](std::size_t i) const { return items_[i]; }
  const std::vector<BasisItem>& items() const { return items_; }

  /// Position of (u, v) in the ordering; throws RangeError if out of range.
  std::size_t index_of(std::size_t u, std::size_t v) const;

 private:
  std::size_t k_;
  std::vector<BasisItem> items_;
};

inline DctBasis build_basis(std::size_t k) { return DctBasis(k); }

/// Coefficients aligned with a DctBasis ordering.
struct CoeffVector {
  std::size_t k = 0;
  std::vector<double> omega;

  double energy() const;
};

CoeffVector project(const Kernel2D& kernel, const DctBasis& basis);

/// Sum of the first n_keep ordered terms; n_keep must be in [1, k^2].
Kernel2D reconstruct(const CoeffVector& omega, const DctBasis& basis, std::size_t n_keep);

/// omega_i^2 / |omega|^2. Throws DomainError on the zero vector.
std::vector<double> energy_distribution(const CoeffVector& omega);

/// CSV: k,u,v,sym_class,omega,energy_fraction (one row per basis item).
void write_coeff_csv(std::ostream& os, const CoeffVector& omega, const DctBasis& basis);

}  // namespace eim
