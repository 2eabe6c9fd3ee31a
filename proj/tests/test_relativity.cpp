#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "eim/error.hpp"
#include "eim/relativity.hpp"
#include "oracles.hpp"

using namespace eim;

namespace {

PropagationTrace linear_trace(std::size_t steps, double speed) {
  PropagationTrace tr;
  for (std::size_t t = 0; t <= steps; ++t) tr.records.push_back({t, speed * static_cast<double>(t), 0.0, 0.0, 1.0});
  return tr;
}

}  // namespace

TEST(Gamma, Examples) {
  EXPECT_EQ(lorentz_gamma(0.0), 1.0);
  EXPECT_NEAR(lorentz_gamma(0.6), 1.25, 1e-15);
  EXPECT_THROW(lorentz_gamma(1.0), DomainError);
  EXPECT_THROW(lorentz_gamma(-0.1), DomainError);
}

TEST(Gamma, SmallSpeedExpansion) {
  for (int i = 0; i <= 50; ++i) {
    const double b = 0.01 * i;
    EXPECT_GE(lorentz_gamma(b), 1.0 + b * b / 2.0);
    EXPECT_LE(lorentz_gamma(b) - (1.0 + b * b / 2.0), b * b * b * b);
  }
}

TEST(Gamma, SquaredFromSplit) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    const auto s = decompose(oracle::random_kernel(3, rng));
    const double g = lorentz_gamma(std::sqrt(s.beta_sq));
    EXPECT_NEAR(gamma_sq(s), g * g, 1e-9 * g * g);
  }
  EXPECT_THROW(gamma_sq(decompose(standard_kernel(kernels::GradX{}, 3))), DomainError);
}

TEST(EnergyRatio, TranslationKernel) {
  const auto s = decompose(standard_kernel(kernels::OffsetImpulse{}, 3));
  EXPECT_NEAR(energy_ratio(s), std::sqrt(3.0), 1e-9);
  EXPECT_EQ(energy_ratio(decompose(standard_kernel(kernels::Dc{}, 3))), 0.0);
}

TEST(ExpectedDisplacement, Examples) {
  const Point2 dc = expected_displacement(standard_kernel(kernels::Dc{}, 3));
  EXPECT_NEAR(dc.x, 0.0, 1e-15);
  EXPECT_NEAR(dc.y, 0.0, 1e-15);
  EXPECT_NEAR(expected_displacement(standard_kernel(kernels::GradX{}, 3)).x, 1.0, 1e-15);
  EXPECT_NEAR(expected_displacement(standard_kernel(kernels::GradX{}, 5)).x, 5.0 / 3.0, 1e-12);
  EXPECT_NEAR(expected_displacement(standard_kernel(kernels::GradY{}, 3)).y, 1.0, 1e-15);
}

TEST(ExpectedDisplacement, MatchesFirstStep) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 50; ++i) {
    const Kernel2D K = oracle::random_kernel(5, rng);
    bool any = false;
    for (double v : K.values()) any |= v > 0.0;
    if (!any) continue;
    RunOptions opt;
    opt.keep_frames = true;
    const Field f = run(Pattern::impulse(), Schedule::constant(K), 1, Activation::ReLU, opt).frames[1];
    const Point2 c = centroid(f), e = expected_displacement(K);
    EXPECT_NEAR(c.x, e.x, 1e-12);
    EXPECT_NEAR(c.y, e.y, 1e-12);
  }
}

TEST(SpeedLimit, Values) {
  EXPECT_EQ(speed_limit(3), 1.0);
  EXPECT_EQ(speed_limit(5), 2.0);
  EXPECT_EQ(schedule_speed_limit(2, ScheduleKind::Embedded2x2), 0.5);
}

TEST(MeasureVelocity, LinearTraces) {
  EXPECT_DOUBLE_EQ(measure_velocity(linear_trace(10, 0.5), 1.0), 0.5);
  EXPECT_DOUBLE_EQ(measure_velocity(linear_trace(10, 0.5), 0.5), 1.0);
  EXPECT_NEAR(measure_velocity(linear_trace(10, -0.5), 1.0, VelocityEstimator::FinalHalfFit), -0.5, 1e-12);
  EXPECT_THROW(measure_velocity(linear_trace(7, 1.0), 1.0), RangeError);
  EXPECT_THROW(measure_velocity(linear_trace(10, 1.0), 0.0), DomainError);
}

TEST(MeasureVelocity, EstimatorsDiffer) {
  // Slow start then constant speed 1: the fit sees only the late slope.
  PropagationTrace tr;
  for (std::size_t t = 0; t <= 10; ++t)
    tr.records.push_back({t, t < 5 ? 0.0 : static_cast<double>(t - 5), 0.0, 0.0, 1.0});
  EXPECT_DOUBLE_EQ(measure_velocity(tr, 1.0), 0.5);
  EXPECT_NEAR(measure_velocity(tr, 1.0, VelocityEstimator::FinalHalfFit), 1.0, 1e-12);
}

TEST(Schedules, Names) {
  EXPECT_EQ(parse_schedule("constant"), ScheduleKind::Constant);
  for (auto k : {ScheduleKind::Constant, ScheduleKind::AlternatingSign, ScheduleKind::Embedded2x2})
    EXPECT_EQ(parse_schedule(to_string(k)), k);
  EXPECT_THROW(parse_schedule("bogus"), RangeError);
  EXPECT_THROW(mixed_schedule(3, ScheduleKind::Embedded2x2, 0.5), RangeError);
}

TEST(Sweep, GridValidation) {
  EXPECT_EQ(uniform_grid(3), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_THROW(uniform_grid(1), RangeError);
  SweepConfig cfg;
  cfg.beta_sq_grid = {0.5, 0.2};
  EXPECT_THROW(sweep(cfg), RangeError);
  cfg.beta_sq_grid = {0.0, 1.5};
  EXPECT_THROW(sweep(cfg), RangeError);
  cfg.beta_sq_grid = {0.0, 1.0};
  cfg.steps = 8;
  EXPECT_THROW(sweep(cfg), RangeError);
}

TEST(Sweep, ReluEndpoints) {
  SweepConfig cfg;
  cfg.beta_sq_grid = {0.0, 0.25, 1.0};
  const SweepTable t = sweep(cfg);
  ASSERT_EQ(t.points.size(), 3u);
  EXPECT_LE(t.points[0].measured_speed_ratio_sq, 1e-12);
  EXPECT_NEAR(t.points[2].measured_speed_ratio_sq, 1.0, 1e-12);
  // Below the ReLU cut-off the speed is (2/3) beta^2 / (1 - beta^2).
  EXPECT_NEAR(t.points[1].measured_speed_ratio_sq, (2.0 / 3.0) * 0.25 / 0.75, 1e-9);
  EXPECT_EQ(t.points[1].predicted_speed_ratio_sq, 0.25);
}

TEST(Sweep, IdentityPeaksInside) {
  SweepConfig cfg;
  cfg.activation = Activation::Identity;
  cfg.beta_sq_grid = uniform_grid(11);
  const SweepTable t = sweep(cfg);
  EXPECT_LE(t.points.back().measured_speed_ratio_sq, 1e-12);
  EXPECT_NEAR(lorentz_compare(t).argmax_beta_sq, 0.5, 1e-12);
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  SweepConfig cfg;
  cfg.beta_sq_grid = uniform_grid(7);
  cfg.threads = 1;
  const SweepTable a = sweep(cfg);
  cfg.threads = 4;
  const SweepTable b = sweep(cfg);
  for (std::size_t i = 0; i < a.points.size(); ++i)
    EXPECT_EQ(a.points[i].measured_speed_ratio_sq, b.points[i].measured_speed_ratio_sq);
}

TEST(Sweep, OtherSchedulesRun) {
  SweepConfig cfg;
  cfg.beta_sq_grid = {0.0, 1.0};
  cfg.schedule = ScheduleKind::AlternatingSign;
  const SweepTable alt = sweep(cfg);
  EXPECT_LE(alt.points.back().measured_speed_ratio_sq, 1e-12);
  cfg.size = 2;
  cfg.schedule = ScheduleKind::Embedded2x2;
  const SweepTable emb = sweep(cfg);
  EXPECT_EQ(emb.points.size(), 2u);
  EXPECT_EQ(emb.points[0].kernel_size, 2u);
}

TEST(LorentzCompare, Report) {
  SweepTable t;
  for (auto [b, m] : std::vector<std::pair<double, double>>{{0.0, 0.0}, {0.5, 0.7}, {1.0, 0.6}})
    t.points.push_back({b, 3, Activation::ReLU, std::sqrt(m), m, b});
  const auto r = lorentz_compare(t);
  EXPECT_NEAR(r.max_abs_dev, 0.4, 1e-12);
  EXPECT_FALSE(r.is_monotone);
  EXPECT_EQ(r.argmax_beta_sq, 0.5);
}

TEST(SweepExport, CsvAndGnuplot) {
  SweepTable t;
  t.points.push_back({0.0, 3, Activation::ReLU, 0.0, 0.0, 0.0});
  t.points.push_back({1.0, 3, Activation::ReLU, 1.0, 1.0, 1.0});
  std::ostringstream csv, gp;
  const std::vector<SweepTable> tables{t, t};
  write_sweep_csv(csv, tables);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "beta_sq,size,activation,measured_ratio_sq,predicted_ratio_sq");
  EXPECT_NE(csv.str().find("1,3,relu,1,1\n"), std::string::npos);
  write_sweep_gnuplot(gp, tables);
  EXPECT_NE(gp.str().find("\n\n\n"), std::string::npos);
}
