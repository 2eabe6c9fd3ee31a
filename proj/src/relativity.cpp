#include "eim/relativity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>

#include "eim/csv.hpp"
#include "eim/error.hpp"

namespace eim {

double lorentz_gamma(double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw DomainError("lorentz_gamma: beta must lie in [0, 1)");
  return 1.0 / std::sqrt(1.0 - beta * beta);
}

double gamma_sq(const EvenOddSplit& split) {
  if (!(split.energy_even > 0.0)) throw DomainError("gamma: kernel has no even energy");
  return 1.0 + split.energy_odd / split.energy_even;
}

double energy_ratio(const EvenOddSplit& split) {
  if (!(split.energy_even > 0.0)) throw DomainError("energy ratio: kernel has no even energy");
  return std::sqrt(split.energy_odd / split.energy_even);
}

Point2 expected_displacement(const Kernel2D& kernel) {
  double mass = 0.0, mx = 0.0, my = 0.0;
  for (std::size_t r = 0; r < kernel.size(); ++r) {
    for (std::size_t c = 0; c < kernel.size(); ++c) {
      const double w = std::max(kernel(r, c), 0.0);
      mass += w;
      mx += w * kernel.centered(c);
      my += w * kernel.centered(r);
    }
  }
  if (!(mass > 0.0)) throw DomainError("expected displacement: kernel has no positive weight");
  return {mx / mass, my / mass};
}

double speed_limit(std::size_t k) {
  if (k == 0) throw RangeError("speed limit of an empty kernel");
  return 0.5 * static_cast<double>(k - 1);
}

double measure_velocity(const PropagationTrace& trace, double c, VelocityEstimator estimator) {
  if (!(c > 0.0)) throw DomainError("measure_velocity: speed limit must be positive");
  if (trace.records.size() < 9) throw RangeError("measure_velocity: trace needs at least 8 steps");
  const auto& rec = trace.records;
  const std::size_t T = rec.size() - 1;

  if (estimator == VelocityEstimator::MeanDisplacement) {
    const double dt = static_cast<double>(rec[T].t - rec[0].t);
    return (rec[T].centroid_x - rec[0].centroid_x) / dt / c;
  }

  const std::size_t first = T / 2;
  const double n = static_cast<double>(T - first + 1);
  double st = 0.0, sx = 0.0;
  for (std::size_t i = first; i <= T; ++i) {
    st += static_cast<double>(rec[i].t);
    sx += rec[i].centroid_x;
  }
  const double tm = st / n, xm = sx / n;
  double stt = 0.0, stx = 0.0;
  for (std::size_t i = first; i <= T; ++i) {
    const double dt = static_cast<double>(rec[i].t) - tm;
    stt += dt * dt;
    stx += dt * (rec[i].centroid_x - xm);
  }
  if (!(stt > 0.0)) throw DomainError("measure_velocity: degenerate fit");
  return stx / stt / c;
}

std::string_view to_string(ScheduleKind s) {
  switch (s) {
    case ScheduleKind::Constant: return "constant";
    case ScheduleKind::AlternatingSign: return "alternating";
    case ScheduleKind::Embedded2x2: return "embedded2x2";
  }
  return "?";
}

ScheduleKind parse_schedule(std::string_view name) {
  if (name == "constant") return ScheduleKind::Constant;
  if (name == "alternating") return ScheduleKind::AlternatingSign;
  if (name == "embedded2x2" || name == "embedded") return ScheduleKind::Embedded2x2;
  throw RangeError("unknown schedule '" + std::string(name) + "'");
}

Schedule mixed_schedule(std::size_t size, ScheduleKind kind, double beta) {
  if (size == 2 || kind == ScheduleKind::Embedded2x2) {
    if (size != 2) throw RangeError("the 2x2 embedding schedule needs size 2");
    const Kernel2D mixed = mix(standard_kernel(kernels::Dc{}, 2),
                               standard_kernel(kernels::GradX{}, 2), beta);
    return Schedule::alternating(embed_2x2(mixed, 0), embed_2x2(mixed, 1));
  }
  const Kernel2D mixed = mix(standard_kernel(kernels::Dc{}, size),
                             standard_kernel(kernels::GradX{}, size), beta);
  if (kind == ScheduleKind::AlternatingSign) return Schedule::alternating_odd(mixed);
  return Schedule::constant(mixed);
}

double schedule_speed_limit(std::size_t size, ScheduleKind kind) {
  if (size == 2 || kind == ScheduleKind::Embedded2x2) return 0.5;
  return speed_limit(size);
}

std::vector<double> uniform_grid(std::size_t n) {
  if (n < 2) throw RangeError("grid needs at least 2 points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

namespace {

unsigned resolve_threads(unsigned requested, std::size_t jobs) {
  unsigned n = requested;
  if (n == 0) {
    if (const char* env = std::getenv("EIM_THREADS")) {
      try {
        n = static_cast<unsigned>(std::stoul(env));
      } catch (const std::exception&) {
        n = 0;
      }
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

SweepPoint sweep_point(const SweepConfig& cfg, double beta_sq) {
  const double beta = std::sqrt(beta_sq);
  const Schedule schedule = mixed_schedule(cfg.size, cfg.schedule, beta);
  const double c = schedule_speed_limit(cfg.size, cfg.schedule);
  const PropagationTrace trace = run(Pattern::impulse(), schedule, cfg.steps, cfg.activation);
  SweepPoint p;
  p.beta_sq = beta_sq;
  p.kernel_size = cfg.size;
  p.activation = cfg.activation;
  p.measured_speed_ratio = measure_velocity(trace, c, cfg.estimator);
  p.measured_speed_ratio_sq = p.measured_speed_ratio * p.measured_speed_ratio;
  p.predicted_speed_ratio_sq = beta_sq;
  return p;
}

}  // namespace

SweepTable sweep(const SweepConfig& cfg) {
  if (cfg.steps < 16) throw RangeError("sweep needs at least 16 steps");
  if (cfg.beta_sq_grid.empty()) throw RangeError("sweep grid is empty");
  for (std::size_t i = 0; i < cfg.beta_sq_grid.size(); ++i) {
    const double b = cfg.beta_sq_grid[i];
    if (!(b >= 0.0 && b <= 1.0)) throw RangeError("sweep grid values must lie in [0, 1]");
    if (i > 0 && !(b > cfg.beta_sq_grid[i - 1]))
      throw RangeError("sweep grid must be strictly increasing");
  }

  SweepTable table{cfg.size, cfg.activation, cfg.schedule, {}};
  const std::size_t n = cfg.beta_sq_grid.size();
  table.points.resize(n);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        table.points[i] = sweep_point(cfg, cfg.beta_sq_grid[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const unsigned threads = resolve_threads(cfg.threads, n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return table;
}

LorentzReport lorentz_compare(const SweepTable& table) {
  LorentzReport rep;
  if (table.points.empty()) return rep;
  double best = -1.0;
  for (std::size_t i = 0; i < table.points.size(); ++i) {
    const auto& p = table.points[i];
    rep.max_abs_dev =
        std::max(rep.max_abs_dev, std::abs(p.measured_speed_ratio_sq - p.predicted_speed_ratio_sq));
    if (i > 0 && p.measured_speed_ratio_sq < table.points[i - 1].measured_speed_ratio_sq)
      rep.is_monotone = false;
    if (p.measured_speed_ratio_sq > best) {
      best = p.measured_speed_ratio_sq;
      rep.argmax_beta_sq = p.beta_sq;
    }
  }
  return rep;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepTable> tables) {
  os << "beta_sq,size,activation,measured_ratio_sq,predicted_ratio_sq\n";
  for (const auto& t : tables)
    for (const auto& p : t.points)
      os << fmt_num(p.beta_sq) << ',' << p.kernel_size << ',' << to_string(p.activation) << ','
         << fmt_num(p.measured_speed_ratio_sq) << ',' << fmt_num(p.predicted_speed_ratio_sq)
         << '\n';
}

void write_sweep_gnuplot(std::ostream& os, std::span<const SweepTable> tables) {
  bool first = true;
  for (const auto& t : tables) {
    if (!first) os << "\n\n";
    first = false;
    os << "# size " << t.size << "x" << t.size << ", activation " << to_string(t.activation)
       << ", schedule " << to_string(t.schedule) << '\n'
       << "# beta_sq measured_ratio_sq predicted_ratio_sq\n";
    for (const auto& p : t.points)
      os << fmt_num(p.beta_sq) << ' ' << fmt_num(p.measured_speed_ratio_sq) << ' '
         << fmt_num(p.predicted_speed_ratio_sq) << '\n';
  }
}

}  // namespace eim
