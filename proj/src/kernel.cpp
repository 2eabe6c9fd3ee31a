#include "eim/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eim/error.hpp"

namespace eim {
namespace {

void require_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw RangeError("kernel contains a non-finite value");
  }
}

double sum_squares(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v * v;
  return s;
}

}  // namespace

Kernel1D::Kernel1D(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ShapeError("1D kernel must have at least one value");
  require_finite(values_);
}

Kernel1D::Kernel1D(std::initializer_list<double> values)
    : Kernel1D(std::vector<double>(values)) {}

Kernel1D Kernel1D::zeros(std::size_t n) { return Kernel1D(std::vector<double>(n, 0.0)); }

double Kernel1D::energy() const { return sum_squares(values_); }

Kernel2D::Kernel2D(std::size_t k) : k_(k), values_(k * k, 0.0) {
  if (k == 0) throw ShapeError("kernel size must be positive");
}

Kernel2D::Kernel2D(std::size_t k, std::vector<double> values)
    : k_(k), values_(std::move(values)) {
  if (k == 0) throw ShapeError("kernel size must be positive");
  if (values_.size() != k * k) {
    throw ShapeError("kernel of size " + std::to_string(k) + " needs " +
                     std::to_string(k * k) + " values, got " +
                     std::to_string(values_.size()));
  }
  require_finite(values_);
}

Kernel2D Kernel2D::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t k = rows.size();
  std::vector<double> values;
  values.reserve(k * k);
  for (const auto& row : rows) {
    if (row.size() != k) throw ShapeError("kernel rows do not form a square");
    values.insert(values.end(), row.begin(), row.end());
  }
  return Kernel2D(k, std::move(values));
}

double Kernel2D::energy() const { return sum_squares(values_); }

double Kernel2D::norm() const { return std::sqrt(energy()); }

Kernel2D Kernel2D::transposed() const {
  Kernel2D out(k_);
  for (std::size_t r = 0; r < k_; ++r)
    for (std::size_t c = 0; c < k_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

Kernel2D& Kernel2D::operator+=(const Kernel2D& other) {
  if (other.k_ != k_) throw ShapeError("kernel size mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Kernel2D& Kernel2D::operator-=(const Kernel2D& other) {
  if (other.k_ != k_) throw ShapeError("kernel size mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Kernel2D& Kernel2D::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

double dot(const Kernel2D& a, const Kernel2D& b) {
  if (a.size() != b.size()) throw ShapeError("kernel size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.count(); ++i) s += a.values()[i] * b.values()[i];
  return s;
}

double dot(const Kernel1D& a, const Kernel1D& b) {
  if (a.size() != b.size()) throw ShapeError("kernel length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs_diff(const Kernel2D& a, const Kernel2D& b) {
  if (a.size() != b.size()) throw ShapeError("kernel size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.count(); ++i)
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

}  // namespace eim
