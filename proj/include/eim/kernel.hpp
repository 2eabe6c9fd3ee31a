#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace eim {

/// One-dimensional real kernel or signal. Index 0 is the leftmost sample.
class Kernel1D {
 public:
  Kernel1D() = default;
  explicit Kernel1D(std::vector<double> values);
  Kernel1D(std::initializer_list<double> values);

  static Kernel1D zeros(std::size_t n);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Sum of squares.
  double energy() const;

  friend bool operator==(const Kernel1D&, const Kernel1D&) = default;

 private:
  std::vector<double> values_;
};

/// Square k x k real kernel stored row-major.
///
/// Storage index (row, col) maps to centered coordinates
///   x = col - (k-1)/2,  y = row - (k-1)/2
/// so +x points right (increasing column) and +y points down (increasing
/// row). For even k the centered coordinates are half-integers.
class Kernel2D {
 public:
  Kernel2D() = default;
  /// All-zero kernel of size k; throws ShapeError for k == 0.
  explicit Kernel2D(std::size_t k);
  /// Throws ShapeError unless values.size() == k*k and k > 0, and
  /// RangeError on non-finite values.
  Kernel2D(std::size_t k, std::vector<double> values);

  /// Builds from nested rows; throws ShapeError if not square.
  static Kernel2D from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t size() const { return k_; }
  std::size_t count() const { return values_.size(); }

  double operator()(std::size_t row, std::size_t col) const { return values_[row * k_ + col]; }
  double& operator()(std::size_t row, std::size_t col) { return values_[row * k_ + col]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Centered coordinate of a storage column (or row) index.
  double centered(std::size_t index) const {
    return static_cast<double>(index) - 0.5 * static_cast<double>(k_ - 1);
  }

  double energy() const;
  double norm() const;

  Kernel2D transposed() const;

  Kernel2D& operator+=(const Kernel2D& other);
  Kernel2D& operator-=(const Kernel2D& other);
  Kernel2D& operator*=(double s);

  friend Kernel2D operator+(Kernel2D a, const Kernel2D& b) { return a += b; }
  friend Kernel2D operator-(Kernel2D a, const Kernel2D& b) { return a -= b; }
  friend Kernel2D operator*(Kernel2D a, double s) { return a *= s; }
  friend Kernel2D operator*(double s, Kernel2D a) { return a *= s; }
  friend bool operator==(const Kernel2D&, const Kernel2D&) = default;

 private:
  std::size_t k_ = 0;
  std::vector<double> values_;
};

double dot(const Kernel2D& a, const Kernel2D& b);
double dot(const Kernel1D& a, const Kernel1D& b);

/// Largest absolute elementwise difference; throws ShapeError on size mismatch.
double max_abs_diff(const Kernel2D& a, const Kernel2D& b);

}  // namespace eim
