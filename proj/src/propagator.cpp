#include "eim/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "eim/csv.hpp"
#include "eim/error.hpp"
#include "eim/kernelspace.hpp"

namespace eim {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Identity: return "identity";
    case Activation::ReLU: return "relu";
    case Activation::Modulus: return "modulus";
  }
  return "?";
}

Activation parse_activation(std::string_view name) {
  if (name == "identity" || name == "none") return Activation::Identity;
  if (name == "relu") return Activation::ReLU;
  if (name == "modulus" || name == "abs") return Activation::Modulus;
  throw RangeError("unknown activation '" + std::string(name) + "'");
}

void apply_activation(std::span<double> values, Activation act) {
  switch (act) {
    case Activation::Identity: return;
    case Activation::ReLU:
      for (double& v : values) v = v > 0.0 ? v : 0.0;
      return;
    case Activation::Modulus:
      for (double& v : values) v = std::abs(v);
      return;
  }
}

std::vector<double> activation(std::span<const double> values, Activation act) {
  std::vector<double> out(values.begin(), values.end());
  apply_activation(out, act);
  return out;
}

Kernel1D conv_full_1d(const Kernel1D& signal, const Kernel1D& kernel) {
  if (signal.empty() || kernel.empty()) throw ShapeError("conv_full_1d: empty input");
  const std::size_t n = signal.size(), m = kernel.size();
  std::vector<double> out(n + m - 1, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) out[i + j] += signal[i] * kernel[j];
  return Kernel1D(std::move(out));
}

std::vector<Kernel1D> run_1d(const Kernel1D& signal, std::span<const Kernel1D> kernels,
                             std::size_t steps, Activation act) {
  if (kernels.empty()) throw ShapeError("run_1d: empty kernel schedule");
  std::vector<Kernel1D> history{signal};
  history.reserve(steps + 1);
  for (std::size_t t = 1; t <= steps; ++t) {
    Kernel1D next = conv_full_1d(history.back(), kernels[(t - 1) % kernels.size()]);
    apply_activation(next.values(), act);
    history.push_back(std::move(next));
  }
  return history;
}

Moments1D moments_1d(std::span<const double> values, double origin) {
  Moments1D m;
  double first = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = std::abs(values[i]);
    m.mass += w;
    first += w * (static_cast<double>(i) - origin);
  }
  if (!(m.mass > 0.0)) throw DomainError("moments of a zero-mass signal");
  m.mean = first / m.mass;
  double second = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = static_cast<double>(i) - origin - m.mean;
    second += std::abs(values[i]) * d * d;
  }
  m.sigma = std::sqrt(second / m.mass);
  return m;
}

// ---------------------------------------------------------------------------

Field::Field(std::size_t width, std::size_t height, std::size_t origin_col,
             std::size_t origin_row)
    : width_(width),
      height_(height),
      origin_col_(origin_col),
      origin_row_(origin_row),
      values_(width * height, 0.0) {
  if (width == 0 || height == 0) throw ShapeError("field dimensions must be positive");
  if (origin_col >= width || origin_row >= height)
    throw RangeError("field origin lies outside the canvas");
}

double Field::at(long x, long y) const {
  const long col = static_cast<long>(origin_col_) + x;
  const long row = static_cast<long>(origin_row_) + y;
  if (col < 0 || row < 0 || col >= static_cast<long>(width_) || row >= static_cast<long>(height_))
    return 0.0;
  return (*this)(static_cast<std::size_t>(row), static_cast<std::size_t>(col));
}

double Field::l1_mass() const {
  double s = 0.0;
  for (double v : values_) s += std::abs(v);
  return s;
}

std::size_t Pattern::extent() const {
  if (kind == Kind::Impulse) return 0;
  return static_cast<std::size_t>(std::floor(radius));
}

namespace {

// True if any nonzero cell lies within `band` cells of the canvas edge.
bool touches_border(const Field& f, std::size_t band) {
  if (band == 0) return false;
  const std::size_t w = f.width(), h = f.height();
  for (std::size_t r = 0; r < h; ++r) {
    const bool edge_row = r < band || r + band >= h;
    for (std::size_t c = 0; c < w; ++c) {
      if (!edge_row && c >= band && c + band < w) {
        c = w - band - 1;  // jump to the right band
        continue;
      }
      if (f(r, c) != 0.0) return true;
    }
  }
  return false;
}

void require_odd_kernel(const Kernel2D& kernel, const Field& field) {
  if (kernel.size() % 2 == 0)
    throw ShapeError("2D propagation needs an odd kernel size; embed 2x2 kernels in 3x3");
  if (kernel.size() > field.width() || kernel.size() > field.height())
    throw ShapeError("kernel is larger than the canvas");
}

// Convolution + activation + renormalization; returns the pre-normalization mass.
double advance(const Field& in, const Kernel2D& kernel, Activation act, Field& out) {
  require_odd_kernel(kernel, in);
  const std::size_t reach = (kernel.size() - 1) / 2;
  if (touches_border(in, reach))
    throw BoundaryOverflowError("activation within kernel reach of the canvas border");
  out = convolve_same(in, kernel);
  apply_activation(out.values(), act);
  const double mass = renormalize(out);
  if (touches_border(out, kBorderBand))
    throw BoundaryOverflowError("activation reached the canvas border band");
  return mass;
}

}  // namespace

Field rasterize_pattern(const Pattern& pattern, std::size_t width, std::size_t height) {
  if (pattern.kind == Pattern::Kind::Circle && !(pattern.radius >= 0.0))
    throw RangeError("circle radius must be nonnegative");
  Field f(width, height, (width - 1) / 2, (height - 1) / 2);
  const long e = static_cast<long>(pattern.extent());
  const double r2 = pattern.radius * pattern.radius;
  for (long y = -e; y <= e; ++y) {
    for (long x = -e; x <= e; ++x) {
      if (pattern.kind == Pattern::Kind::Circle &&
          static_cast<double>(x * x + y * y) > r2)
        continue;
      const long col = static_cast<long>(f.origin_col()) + x;
      const long row = static_cast<long>(f.origin_row()) + y;
      const long band = static_cast<long>(kBorderBand);
      if (col < band || row < band || col + band >= static_cast<long>(width) ||
          row + band >= static_cast<long>(height))
        throw RangeError("canvas too small for pattern");
      f(static_cast<std::size_t>(row), static_cast<std::size_t>(col)) = 1.0;
    }
  }
  return f;
}

Point2 centroid(const Field& field, MeasureMode mode) {
  double mass = 0.0, mx = 0.0, my = 0.0;
  const long oc = static_cast<long>(field.origin_col());
  const long orow = static_cast<long>(field.origin_row());
  if (mode == MeasureMode::CentralRow) {
    for (std::size_t c = 0; c < field.width(); ++c) {
      const double w = std::abs(field(field.origin_row(), c));
      mass += w;
      mx += w * static_cast<double>(static_cast<long>(c) - oc);
    }
    if (!(mass > 0.0)) throw DomainError("centroid of a zero-mass central row");
    return {mx / mass, 0.0};
  }
  for (std::size_t r = 0; r < field.height(); ++r) {
    double row_mass = 0.0;
    for (std::size_t c = 0; c < field.width(); ++c) {
      const double w = std::abs(field(r, c));
      row_mass += w;
      mx += w * static_cast<double>(static_cast<long>(c) - oc);
    }
    mass += row_mass;
    my += row_mass * static_cast<double>(static_cast<long>(r) - orow);
  }
  if (!(mass > 0.0)) throw DomainError("centroid of a zero-mass field");
  return {mx / mass, my / mass};
}

double spread(const Field& field, MeasureMode mode) {
  const double mu = centroid(field, mode).x;
  const long oc = static_cast<long>(field.origin_col());
  double mass = 0.0, var = 0.0;
  const std::size_t r0 = mode == MeasureMode::CentralRow ? field.origin_row() : 0;
  const std::size_t r1 = mode == MeasureMode::CentralRow ? r0 + 1 : field.height();
  for (std::size_t r = r0; r < r1; ++r) {
    for (std::size_t c = 0; c < field.width(); ++c) {
      const double w = std::abs(field(r, c));
      const double d = static_cast<double>(static_cast<long>(c) - oc) - mu;
      mass += w;
      var += w * d * d;
    }
  }
  return std::sqrt(var / mass);
}

std::size_t support_width(const Field& field, double rel_tol) {
  double peak = 0.0;
  for (double v : field.values()) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0;
  const double thresh = rel_tol * peak;
  std::size_t lo = field.width(), hi = 0;
  for (std::size_t r = 0; r < field.height(); ++r) {
    for (std::size_t c = 0; c < field.width(); ++c) {
      if (std::abs(field(r, c)) > thresh) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
      }
    }
  }
  return hi - lo + 1;
}

Field convolve_same(const Field& field, const Kernel2D& kernel) {
  require_odd_kernel(kernel, field);
  const long k = static_cast<long>(kernel.size());
  const long h = (k - 1) / 2;
  const long w = static_cast<long>(field.width());
  const long ht = static_cast<long>(field.height());
  Field out(field.width(), field.height(), field.origin_col(), field.origin_row());
  // Scatter each nonzero input cell: out(p + d) += f(p) * K(d).
  for (long r = 0; r < ht; ++r) {
    for (long c = 0; c < w; ++c) {
      const double v = field(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      if (v == 0.0) continue;
      for (long i = 0; i < k; ++i) {
        const long rr = r + i - h;
        if (rr < 0 || rr >= ht) continue;
        for (long j = 0; j < k; ++j) {
          const long cc = c + j - h;
          if (cc < 0 || cc >= w) continue;
          out(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc)) +=
              v * kernel(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
      }
    }
  }
  return out;
}

double renormalize(Field& field) {
  const double mass = field.l1_mass();
  if (mass > 0.0)
    for (double& v : field.values()) v /= mass;
  return mass;
}

Field step(const Field& field, const Kernel2D& kernel, Activation act) {
  Field out;
  advance(field, kernel, act, out);
  return out;
}

// ---------------------------------------------------------------------------

Schedule::Schedule(std::vector<Kernel2D> kernels) : kernels_(std::move(kernels)) {
  if (kernels_.empty()) throw ShapeError("schedule needs at least one kernel");
  for (const auto& k : kernels_)
    if (k.size() != kernels_.front().size())
      throw ShapeError("all scheduled kernels must have the same size");
}

Schedule Schedule::constant(Kernel2D kernel) { return Schedule({std::move(kernel)}); }

Schedule Schedule::alternating_odd(const Kernel2D& kernel) {
  const EvenOddSplit s = decompose(kernel);
  return Schedule({kernel, s.even - s.odd});
}

Schedule Schedule::alternating(Kernel2D first, Kernel2D second) {
  return Schedule({std::move(first), std::move(second)});
}

const Kernel2D& Schedule::kernel_at(std::size_t t) const {
  if (t == 0) throw RangeError("schedule steps are 1-based");
  return kernels_[(t - 1) % kernels_.size()];
}

std::size_t canvas_size(const Pattern& pattern, const Schedule& schedule, std::size_t steps,
                        std::size_t margin) {
  return 2 * (pattern.extent() + steps * schedule.reach() + margin) + 1;
}

PropagationTrace run(const Pattern& pattern, const Schedule& schedule, std::size_t steps,
                     Activation act, const RunOptions& options) {
  const std::size_t side = canvas_size(pattern, schedule, steps, options.margin);
  return run(rasterize_pattern(pattern, side, side), schedule, steps, act, options);
}

PropagationTrace run(Field initial, const Schedule& schedule, std::size_t steps, Activation act,
                     const RunOptions& options) {
  PropagationTrace trace;
  trace.records.reserve(steps + 1);
  auto record = [&](std::size_t t, const Field& f, double mass) {
    const Point2 mu = centroid(f, options.mode);
    trace.records.push_back({t, mu.x, mu.y, spread(f, options.mode), mass});
    if (options.keep_frames) trace.frames.push_back(f);
  };

  Field current = std::move(initial);
  record(0, current, current.l1_mass());
  Field next;
  for (std::size_t t = 1; t <= steps; ++t) {
    const double mass = advance(current, schedule.kernel_at(t), act, next);
    if (!(mass > 0.0))
      throw DomainError("activation vanished at step " + std::to_string(t));
    std::swap(current, next);
    record(t, current, mass);
  }
  return trace;
}

void write_trace_csv(std::ostream& os, const PropagationTrace& trace) {
  os << "t,centroid_x,centroid_y,sigma_x,mass\n";
  for (const auto& r : trace.records)
    os << r.t << ',' << fmt_num(r.centroid_x) << ',' << fmt_num(r.centroid_y) << ','
       << fmt_num(r.sigma_x) << ',' << fmt_num(r.mass) << '\n';
}

void write_frame_pgm(std::ostream& os, const Field& field) {
  double peak = 0.0;
  for (double v : field.values()) peak = std::max(peak, std::abs(v));
  os << "P5\n" << field.width() << ' ' << field.height() << "\n255\n";
  for (double v : field.values()) {
    const double s = peak > 0.0 ? std::abs(v) / peak : 0.0;
    os.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * s))));
  }
}

void write_frames_csv(std::ostream& os, std::span<const Field> frames) {
  os << "t,x,y,value\n";
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const Field& f = frames[t];
    const long oc = static_cast<long>(f.origin_col()), orow = static_cast<long>(f.origin_row());
    for (std::size_t r = 0; r < f.height(); ++r)
      for (std::size_t c = 0; c < f.width(); ++c)
        if (f(r, c) != 0.0)
          os << t << ',' << static_cast<long>(c) - oc << ',' << static_cast<long>(r) - orow
             << ',' << fmt_num(f(r, c)) << '\n';
  }
}

}  // namespace eim
