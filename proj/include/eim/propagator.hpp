#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "eim/kernel.hpp"

namespace eim {

enum class Activation { Identity, ReLU, Modulus };

std::string_view to_string(Activation a);
/// Accepts "identity"/"none", "relu", "modulus"/"abs"; throws RangeError.
Activation parse_activation(std::string_view name);

void apply_activation(std::span<double> values, Activation act);
std::vector<double> activation(std::span<const double> values, Activation act);

// ---------------------------------------------------------------------------
// 1D growing-array dynamics

/// Full convolution, out[n] = sum_i signal[i] * kernel[n - i]; length n+m-1.
/// With this orientation [0,1,0] * [1,-1] -> ReLU -> [0,1,0,0] (shift left)
/// and [0,1,0] * [-1,1] -> ReLU -> [0,0,1,0] (shift right).
Kernel1D conv_full_1d(const Kernel1D& signal, const Kernel1D& kernel);

/// Repeated conv_full_1d + activation. kernels are cycled (step t uses
/// kernels[(t-1) % size]). Returns every state including t = 0; no
/// renormalization is applied.
std::vector<Kernel1D> run_1d(const Kernel1D& signal, std::span<const Kernel1D> kernels,
                             std::size_t steps, Activation act);

struct Moments1D {
  double mass = 0.0;   // sum |f|
  double mean = 0.0;   // in index coordinates minus origin
  double sigma = 0.0;
};

/// Moments of |f| with position i - origin. Throws DomainError on zero mass.
Moments1D moments_1d(std::span<const double> values, double origin = 0.0);

// ---------------------------------------------------------------------------
// 2D fields

/// Fixed-size activation canvas. Pixel (row, col) has centered coordinates
/// x = col - origin_col, y = row - origin_row.
class Field {
 public:
  Field() = default;
  Field(std::size_t width, std::size_t height, std::size_t origin_col, std::size_t origin_row);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t origin_col() const { return origin_col_; }
  std::size_t origin_row() const { return origin_row_; }

  double operator()(std::size_t row, std::size_t col) const { return values_[row * width_ + col]; }
  double& operator()(std::size_t row, std::size_t col) { return values_[row * width_ + col]; }

  /// Value at centered coordinates; 0 outside the canvas.
  double at(long x, long y) const;

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double l1_mass() const;

 private:
  std::size_t width_ = 0, height_ = 0;
  std::size_t origin_col_ = 0, origin_row_ = 0;
  std::vector<double> values_;
};

struct Pattern {
  enum class Kind { Impulse, Circle };
  Kind kind = Kind::Impulse;
  double radius = 0.0;  // Circle only

  static Pattern impulse() { return {Kind::Impulse, 0.0}; }
  static Pattern circle(double r) { return {Kind::Circle, r}; }

  /// Largest |x| or |y| covered by the pattern.
  std::size_t extent() const;
};

/// Pixels within this many cells of the border must stay empty.
inline constexpr std::size_t kBorderBand = 2;

/// Pattern centered on the canvas center. Impulse is a single 1, Circle the
/// indicator of x^2 + y^2 <= r^2. Throws RangeError if the pattern reaches
/// the border band.
Field rasterize_pattern(const Pattern& pattern, std::size_t width, std::size_t height);

enum class MeasureMode { Full2D, CentralRow };

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Center of mass of |f| (over the whole canvas, or along y = 0 with
/// centroid y fixed at 0). Throws DomainError on zero mass.
Point2 centroid(const Field& field, MeasureMode mode = MeasureMode::Full2D);

/// Horizontal standard deviation of |f| about its centroid.
double spread(const Field& field, MeasureMode mode = MeasureMode::Full2D);

/// Inclusive horizontal extent of cells with |f| > rel_tol * max|f|, as
/// max_x - min_x + 1. Zero for an empty field.
std::size_t support_width(const Field& field, double rel_tol = 1e-12);

/// Same-size zero-padded convolution; the impulse response of kernel K is K
/// itself centered on the impulse, +x to +x. Kernel size must be odd.
Field convolve_same(const Field& field, const Kernel2D& kernel);

/// Divides by the L1 mass and returns the mass it divided by; a zero field
/// is left unchanged and 0 returned.
double renormalize(Field& field);

/// One layer: convolve_same, activation, L1 renormalization.
///
/// Throws BoundaryOverflowError if the input has mass within the kernel
/// reach of the border (the convolution would clip) or the output has mass
/// inside the border band.
Field step(const Field& field, const Kernel2D& kernel, Activation act);

/// Kernel sequence applied by run(). Step t (1-based) uses
/// kernels[(t - 1) % kernels.size()].
class Schedule {
 public:
  static Schedule constant(Kernel2D kernel);
  /// Even part fixed, odd part multiplied by +1, -1, +1, ... per step.
  static Schedule alternating_odd(const Kernel2D& kernel);
  /// Cycle between two kernels, e.g. the two 2x2 embeddings.
  static Schedule alternating(Kernel2D first, Kernel2D second);

  const Kernel2D& kernel_at(std::size_t t) const;
  std::span<const Kernel2D> kernels() const { return kernels_; }
  std::size_t kernel_size() const { return kernels_.front().size(); }
  /// Maximum per-step reach in pixels, (k-1)/2.
  std::size_t reach() const { return (kernel_size() - 1) / 2; }

 private:
  explicit Schedule(std::vector<Kernel2D> kernels);
  std::vector<Kernel2D> kernels_;
};

struct TraceRecord {
  std::size_t t = 0;
  double centroid_x = 0.0;
  double centroid_y = 0.0;
  double sigma_x = 0.0;
  double mass = 0.0;  // L1 mass after activation, before renormalization
};

struct PropagationTrace {
  std::vector<TraceRecord> records;  // steps + 1 entries
  std::vector<Field> frames;         // empty unless requested
};

struct RunOptions {
  MeasureMode mode = MeasureMode::Full2D;
  bool keep_frames = false;
  std::size_t margin = 4;
};

/// Side of the square canvas used by run(): pattern extent plus
/// steps * reach plus margin on every side.
std::size_t canvas_size(const Pattern& pattern, const Schedule& schedule, std::size_t steps,
                        std::size_t margin = 4);

PropagationTrace run(const Pattern& pattern, const Schedule& schedule, std::size_t steps,
                     Activation act, const RunOptions& options = {});

/// As above, starting from an explicit field.
PropagationTrace run(Field initial, const Schedule& schedule, std::size_t steps, Activation act,
                     const RunOptions& options = {});

// Exports

/// t,centroid_x,centroid_y,sigma_x,mass
void write_trace_csv(std::ostream& os, const PropagationTrace& trace);
/// Binary P5 PGM, 8-bit, |f| scaled so the frame maximum maps to 255.
void write_frame_pgm(std::ostream& os, const Field& field);
/// t,x,y,value for every nonzero cell of every frame (frame index = t).
void write_frames_csv(std::ostream& os, std::span<const Field> frames);

}  // namespace eim
