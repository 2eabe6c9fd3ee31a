#include "eim/dctspec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <tuple>

#include "eim/csv.hpp"
#include "eim/error.hpp"

namespace eim {

std::string_view to_string(SymClass s) {
  switch (s) {
    case SymClass::Even: return "even";
    case SymClass::Odd: return "odd";
    case SymClass::Mixed: return "mixed";
  }
  return "?";
}

SymClass classify_symmetry(std::size_t u, std::size_t v) {
  if (u % 2 == 1 || v % 2 == 1) return SymClass::Odd;
  if (u == v) return SymClass::Even;
  return SymClass::Mixed;
}

DctBasis::DctBasis(std::size_t k) : k_(k) {
  if (k < 1 || k > 16) throw RangeError("DCT basis size must be in [1, 16]");

  const double kd = static_cast<double>(k);
  auto alpha = [&](std::size_t u) { return std::sqrt((u == 0 ? 1.0 : 2.0) / kd); };
  auto cosine = [&](std::size_t x, std::size_t u) {
    return std::cos(std::numbers::pi * static_cast<double>((2 * x + 1) * u) / (2.0 * kd));
  };

  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (std::size_t u = 0; u < k; ++u)
    for (std::size_t v = 0; v < k; ++v) order.emplace_back(u, v);
  std::sort(order.begin(), order.end(), [](auto a, auto b) {
    auto key = [](auto p) {
      const std::size_t d = p.first > p.second ? p.first - p.second : p.second - p.first;
      return std::tuple(p.first + p.second, d, p.first);
    };
    return key(a) < key(b);
  });

  items_.reserve(k * k);
  for (auto [u, v] : order) {
    Kernel2D b(k);
    for (std::size_t y = 0; y < k; ++y)
      for (std::size_t x = 0; x < k; ++x)
        b(y, x) = alpha(u) * alpha(v) * cosine(x, u) * cosine(y, v);
    items_.push_back({u, v, std::move(b), classify_symmetry(u, v)});
  }
}

std::size_t DctBasis::index_of(std::size_t u, std::size_t v) const {
  for (std::size_t i = 0; i < items_.size(); ++i)
    if (items_[i].u == u && items_[i].v == v) return i;
  throw RangeError("DCT index (" + std::to_string(u) + "," + std::to_string(v) +
                   ") out of range");
}

double CoeffVector::energy() const {
  double s = 0.0;
  for (double w : omega) s += w * w;
  return s;
}

CoeffVector project(const Kernel2D& kernel, const DctBasis& basis) {
  if (kernel.size() != basis.size())
    throw ShapeError("project: kernel size " + std::to_string(kernel.size()) +
                     " does not match basis size " + std::to_string(basis.size()));
  CoeffVector out{basis.size(), {}};
  out.omega.reserve(basis.count());
  for (const auto& item : basis.items()) out.omega.push_back(dot(kernel, item.basis));
  return out;
}

Kernel2D reconstruct(const CoeffVector& omega, const DctBasis& basis, std::size_t n_keep) {
  if (omega.k != basis.size() || omega.omega.size() != basis.count())
    throw ShapeError("reconstruct: coefficient vector does not match basis");
  if (n_keep < 1 || n_keep > basis.count())
    throw RangeError("reconstruct: n_keep must be in [1, " + std::to_string(basis.count()) + "]");
  Kernel2D out(basis.size());
  for (std::size_t i = 0; i < n_keep; ++i) out += basis[i].basis * omega.omega[i];
  return out;
}

std::vector<double> energy_distribution(const CoeffVector& omega) {
  const double total = omega.energy();
  if (!(total > 0.0)) throw DomainError("energy distribution of a zero coefficient vector");
  std::vector<double> out;
  out.reserve(omega.omega.size());
  for (double w : omega.omega) out.push_back(w * w / total);
  return out;
}

void write_coeff_csv(std::ostream& os, const CoeffVector& omega, const DctBasis& basis) {
  if (omega.omega.size() != basis.count())
    throw ShapeError("coefficient vector does not match basis");
  // A zero kernel has no distribution; its fractions are written as 0.
  std::vector<double> frac(omega.omega.size(), 0.0);
  if (omega.energy() > 0.0) frac = energy_distribution(omega);
  os << "k,u,v,sym_class,omega,energy_fraction\n";
  for (std::size_t i = 0; i < basis.count(); ++i) {
    const auto& it = basis[i];
    os << basis.size() << ',' << it.u << ',' << it.v << ',' << to_string(it.sym_class) << ','
       << fmt_num(omega.omega[i]) << ',' << fmt_num(frac[i]) << '\n';
  }
}

}  // namespace eim
