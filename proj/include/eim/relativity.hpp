#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "eim/kernelspace.hpp"
#include "eim/propagator.hpp"

namespace eim {

/// Lorentz factor 1/sqrt(1 - beta^2); DomainError unless 0 <= beta < 1.
double lorentz_gamma(double beta);

/// gamma^2 from a split as 1 + |f_o|^2 / |f_e|^2. DomainError if the even
/// energy is zero.
double gamma_sq(const EvenOddSplit& split);

/// |f_o| / |f_e| (momentum-to-rest energy ratio). DomainError on zero even energy.
double energy_ratio(const EvenOddSplit& split);

/// Center of mass of max(kernel, 0) in centered coordinates: the one-step
/// displacement of an impulse under convolution + ReLU.
Point2 expected_displacement(const Kernel2D& kernel);

/// Maximum per-layer displacement (k-1)/2 for a k x k kernel.
double speed_limit(std::size_t k);

enum class VelocityEstimator {
  /// (centroid_x(T) - centroid_x(0)) / T: distance travelled per layer.
  MeanDisplacement,
  /// Least-squares slope of centroid_x over t in [T/2, T].
  FinalHalfFit,
};

/// Signed horizontal speed divided by the speed limit c. Needs >= 8 steps.
double measure_velocity(const PropagationTrace& trace, double c,
                        VelocityEstimator estimator = VelocityEstimator::MeanDisplacement);

enum class ScheduleKind {
  Constant,
  AlternatingSign,  // odd part flips sign every layer
  Embedded2x2,      // 2x2 kernel alternating between the two 3x3 embeddings
};

std::string_view to_string(ScheduleKind s);
ScheduleKind parse_schedule(std::string_view name);

/// Kernel schedule for a sweep point: unit DC and unit x-gradient of the
/// given size mixed at ratio beta (size 2 implies Embedded2x2).
Schedule mixed_schedule(std::size_t size, ScheduleKind kind, double beta);

/// Speed limit c for a sweep configuration (0.5 for the 2x2 embedding).
double schedule_speed_limit(std::size_t size, ScheduleKind kind);

struct SweepPoint {
  double beta_sq = 0.0;
  std::size_t kernel_size = 3;
  Activation activation = Activation::ReLU;
  double measured_speed_ratio = 0.0;  // signed v/c
  double measured_speed_ratio_sq = 0.0;
  double predicted_speed_ratio_sq = 0.0;
};

struct SweepConfig {
  std::size_t size = 3;
  Activation activation = Activation::ReLU;
  ScheduleKind schedule = ScheduleKind::Constant;
  std::vector<double> beta_sq_grid;
  std::size_t steps = 24;
  VelocityEstimator estimator = VelocityEstimator::MeanDisplacement;
  /// 0 = EIM_THREADS if set, else hardware concurrency.
  unsigned threads = 0;
};

struct SweepTable {
  std::size_t size = 3;
  Activation activation = Activation::ReLU;
  ScheduleKind schedule = ScheduleKind::Constant;
  std::vector<SweepPoint> points;
};

/// n evenly spaced values from 0 to 1 inclusive (n >= 2).
std::vector<double> uniform_grid(std::size_t n);

/// Runs one impulse propagation per grid value. Points are independent and
/// evaluated concurrently; the output order always follows the grid.
SweepTable sweep(const SweepConfig& config);

struct LorentzReport {
  double max_abs_dev = 0.0;  // max |measured - predicted|
  bool is_monotone = true;   // measured nondecreasing along the grid
  double argmax_beta_sq = 0.0;
};

LorentzReport lorentz_compare(const SweepTable& table);

/// beta_sq,size,activation,measured_ratio_sq,predicted_ratio_sq
void write_sweep_csv(std::ostream& os, std::span<const SweepTable> tables);

/// Whitespace-separated blocks (one per table, separated by two blank lines
/// so gnuplot can address them with `index`).
void write_sweep_gnuplot(std::ostream& os, std::span<const SweepTable> tables);

}  // namespace eim
