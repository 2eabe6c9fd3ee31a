#include "eim/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "eim/csv.hpp"
#include "eim/dctspec.hpp"
#include "eim/error.hpp"
#include "eim/kernelspace.hpp"
#include "eim/propagator.hpp"
#include "eim/relativity.hpp"
#include "eim/spectra.hpp"
#include "eim/tensor.hpp"

namespace eim {
namespace {

namespace fs = std::filesystem;

// Named kernels so the demo recipes need no kernel files.
const std::map<std::string, std::pair<StandardKernel, std::size_t>>& builtin_kernels() {
  static const std::map<std::string, std::pair<StandardKernel, std::size_t>> table{
      {"dc3", {kernels::Dc{}, 3}},
      {"dc5", {kernels::Dc{}, 5}},
      {"gradx3", {kernels::GradX{}, 3}},
      {"grady3", {kernels::GradY{}, 3}},
      {"gradx5", {kernels::GradX{}, 5}},
      {"trans3", {kernels::OffsetImpulse{kernels::Direction::Right}, 3}},
      {"emb2x2", {kernels::Embedded2x2{0, kernels::Pattern2x2::GradX}, 3}},
  };
  return table;
}

std::string builtin_names() {
  std::string s;
  for (const auto& [name, _] : builtin_kernels()) s += (s.empty() ? "" : ", ") + name;
  return s;
}

Kernel2D resolve_kernel(const std::string& spec) {
  const auto& table = builtin_kernels();
  if (auto it = table.find(spec); it != table.end())
    return standard_kernel(it->second.first, it->second.second);
  if (!fs::exists(spec))
    throw FormatError("'" + spec + "' is neither a kernel file nor a built-in (" +
                      builtin_names() + ")");
  return load_kernel(spec);
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw FormatError("cannot write " + path);
  return f;
}

void print_kernel(std::ostream& out, const std::string& label, const Kernel2D& k) {
  out << label << ":\n";
  for (std::size_t r = 0; r < k.size(); ++r) {
    out << ' ';
    for (std::size_t c = 0; c < k.size(); ++c) out << ' ' << fmt_num(k(r, c));
    out << '\n';
  }
}

std::string ratio_or_inf(const EvenOddSplit& s, bool squared_gamma) {
  if (!(s.energy_even > 0.0)) return "inf";
  return fmt_num(squared_gamma ? std::sqrt(gamma_sq(s)) : energy_ratio(s));
}

// ---------------------------------------------------------------------------

struct DecomposeArgs {
  std::string kernel;
  bool random = false;
  std::size_t size = 3;
  std::uint64_t seed = 1;
};

void cmd_decompose(const DecomposeArgs& a, std::ostream& out) {
  Kernel2D kernel;
  if (a.random) {
    std::mt19937_64 rng(a.seed);
    std::normal_distribution<double> normal;
    std::vector<double> v(a.size * a.size);
    for (double& x : v) x = normal(rng);
    kernel = Kernel2D(a.size, std::move(v));
  } else {
    if (a.kernel.empty()) throw RangeError("decompose needs --kernel or --random");
    kernel = resolve_kernel(a.kernel);
  }
  const EvenOddSplit s = decompose(kernel);
  print_kernel(out, "kernel", kernel);
  print_kernel(out, "even", s.even);
  print_kernel(out, "odd", s.odd);
  out << "energy_even=" << fmt_num(s.energy_even) << '\n'
      << "energy_odd=" << fmt_num(s.energy_odd) << '\n'
      << "beta_sq=" << fmt_num(s.beta_sq) << '\n'
      << "gamma=" << ratio_or_inf(s, true) << '\n'
      << "energy_ratio=" << ratio_or_inf(s, false) << '\n';
}

struct DctArgs {
  std::size_t size = 3;
  std::string kernel;
  std::size_t keep = 0;
  std::string out;
};

void cmd_dct(const DctArgs& a, std::ostream& out) {
  std::ofstream file;
  std::ostream* os = &out;
  if (!a.out.empty()) {
    file = open_out(a.out);
    os = &file;
  }
  if (a.kernel.empty()) {
    const DctBasis basis(a.size);
    *os << "index,u,v,sym_class\n";
    for (std::size_t i = 0; i < basis.count(); ++i)
      *os << i << ',' << basis[i].u << ',' << basis[i].v << ',' << to_string(basis[i].sym_class)
          << '\n';
    return;
  }
  const Kernel2D kernel = resolve_kernel(a.kernel);
  const DctBasis basis(kernel.size());
  const CoeffVector omega = project(kernel, basis);
  write_coeff_csv(*os, omega, basis);
  if (a.keep > 0) print_kernel(out, "reconstruction(n_keep=" + std::to_string(a.keep) + ")",
                               reconstruct(omega, basis, a.keep));
}

struct PropagateArgs {
  std::string pattern = "impulse";
  double radius = 19.0;
  std::string kernel;
  std::size_t size = 3;
  double beta_sq = std::numeric_limits<double>::quiet_NaN();
  std::string schedule = "constant";
  std::string activation = "relu";
  std::size_t steps = 10;
  std::string mode = "full";
  std::string trace;
  std::string frames_dir;
  std::string frames_csv;
};

void cmd_propagate(const PropagateArgs& a, std::ostream& out) {
  Pattern pattern;
  if (a.pattern == "impulse")
    pattern = Pattern::impulse();
  else if (a.pattern == "circle")
    pattern = Pattern::circle(a.radius);
  else
    throw RangeError("unknown pattern '" + a.pattern + "'");

  const ScheduleKind kind = parse_schedule(a.schedule);
  std::optional<Schedule> schedule;
  if (!a.kernel.empty()) {
    if (a.kernel == "emb2x2") {
      schedule = mixed_schedule(2, ScheduleKind::Embedded2x2, 1.0);
    } else {
      const Kernel2D k = resolve_kernel(a.kernel);
      schedule = kind == ScheduleKind::AlternatingSign ? Schedule::alternating_odd(k)
                                                       : Schedule::constant(k);
    }
  } else if (!std::isnan(a.beta_sq)) {
    if (!(a.beta_sq >= 0.0 && a.beta_sq <= 1.0)) throw RangeError("--beta-sq must lie in [0, 1]");
    schedule = mixed_schedule(a.size, kind, std::sqrt(a.beta_sq));
  } else {
    throw RangeError("propagate needs --kernel or --beta-sq");
  }

  RunOptions opts;
  if (a.mode == "row")
    opts.mode = MeasureMode::CentralRow;
  else if (a.mode != "full")
    throw RangeError("unknown measurement mode '" + a.mode + "'");
  opts.keep_frames = !a.frames_dir.empty() || !a.frames_csv.empty();

  const PropagationTrace trace = run(pattern, *schedule, a.steps, parse_activation(a.activation), opts);

  if (!a.trace.empty()) {
    auto f = open_out(a.trace);
    write_trace_csv(f, trace);
  }
  if (!a.frames_csv.empty()) {
    auto f = open_out(a.frames_csv);
    write_frames_csv(f, trace.frames);
  }
  if (!a.frames_dir.empty()) {
    fs::create_directories(a.frames_dir);
    for (std::size_t t = 0; t < trace.frames.size(); ++t) {
      std::ostringstream name;
      name << "frame_" << std::setw(4) << std::setfill('0') << t << ".pgm";
      auto f = open_out((fs::path(a.frames_dir) / name.str()).string(), true);
      write_frame_pgm(f, trace.frames[t]);
    }
  }
  const auto& last = trace.records.back();
  out << "steps=" << a.steps << " centroid_x=" << fmt_num(last.centroid_x)
      << " centroid_y=" << fmt_num(last.centroid_y) << " sigma_x=" << fmt_num(last.sigma_x) << '\n';
}

struct SweepArgs {
  std::vector<std::size_t> sizes{3};
  std::vector<std::string> activations{"relu"};
  std::string schedule = "constant";
  std::size_t grid = 21;
  std::size_t steps = 24;
  std::string estimator = "mean";
  std::string out;
  std::string gnuplot;
  unsigned threads = 0;
};

void cmd_sweep(const SweepArgs& a, std::ostream& out) {
  std::vector<SweepTable> tables;
  for (std::size_t size : a.sizes) {
    for (const auto& act : a.activations) {
      SweepConfig cfg;
      cfg.size = size;
      cfg.activation = parse_activation(act);
      cfg.schedule = size == 2 ? ScheduleKind::Embedded2x2 : parse_schedule(a.schedule);
      cfg.beta_sq_grid = uniform_grid(a.grid);
      cfg.steps = a.steps;
      cfg.threads = a.threads;
      if (a.estimator == "fit")
        cfg.estimator = VelocityEstimator::FinalHalfFit;
      else if (a.estimator != "mean")
        throw RangeError("unknown estimator '" + a.estimator + "'");
      tables.push_back(sweep(cfg));
    }
  }
  if (!a.out.empty()) {
    auto f = open_out(a.out);
    write_sweep_csv(f, tables);
  } else {
    write_sweep_csv(out, tables);
  }
  if (!a.gnuplot.empty()) {
    auto f = open_out(a.gnuplot);
    write_sweep_gnuplot(f, tables);
  }
  for (const auto& t : tables) {
    const LorentzReport r = lorentz_compare(t);
    out << "# size=" << t.size << " activation=" << to_string(t.activation)
        << " schedule=" << to_string(t.schedule) << " max_abs_dev=" << fmt_num(r.max_abs_dev)
        << " monotone=" << (r.is_monotone ? "true" : "false")
        << " argmax_beta_sq=" << fmt_num(r.argmax_beta_sq) << '\n';
  }
}

struct SpectraArgs {
  std::vector<std::string> tensors;
  std::string out;
  bool energy_weighted = false;
};

void cmd_spectra(const SpectraArgs& a, std::ostream& out) {
  std::vector<LayerSpectrum> layers;
  for (const auto& path : a.tensors) {
    WeightTensor t = load_tensor(path);
    if (t.name().empty()) t.set_name(fs::path(path).stem().string());
    layers.push_back(layer_spectrum(t, a.energy_weighted ? Weighting::Energy : Weighting::Uniform));
  }
  if (!a.out.empty()) {
    auto f = open_out(a.out);
    write_spectrum_csv(f, layers);
  } else {
    write_spectrum_csv(out, layers);
  }
  for (const auto& l : layers)
    out << "# " << l.name << ": dc=" << fmt_num(l.dc_fraction)
        << " gradient=" << fmt_num(l.gradient_fraction) << " higher=" << fmt_num(l.higher_fraction)
        << " kernels=" << l.kernels_used << " skipped=" << l.kernels_skipped << '\n';
}

struct TruncateArgs {
  std::string tensor;
  std::size_t keep = 3;
  std::string out;
};

void cmd_truncate(const TruncateArgs& a, std::ostream& out) {
  const WeightTensor t = load_tensor(a.tensor);
  save_tensor(truncate_tensor(t, a.keep), a.out);
  out << "wrote " << a.out << " (n_keep=" << a.keep << ")\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Even/odd kernel mechanics: decomposition, DCT spectra and propagation", "eim"};
  app.require_subcommand(1);

  DecomposeArgs dec;
  auto* c_dec = app.add_subcommand("decompose", "Even/odd split, beta^2, gamma and energy ratio");
  c_dec->add_option("--kernel", dec.kernel, "Kernel file or built-in: " + builtin_names());
  c_dec->add_flag("--random", dec.random, "Use a seeded random-normal kernel");
  c_dec->add_option("--size", dec.size, "Size of the random kernel")->check(CLI::Range(1, 16));
  c_dec->add_option("--seed", dec.seed, "Random seed");

  DctArgs dct;
  auto* c_dct = app.add_subcommand("dct", "Ordered DCT basis table, or project a kernel");
  c_dct->add_option("--size", dct.size, "Basis size")->check(CLI::Range(1, 16));
  c_dct->add_option("--kernel", dct.kernel, "Kernel to project");
  c_dct->add_option("--keep", dct.keep, "Also print the reconstruction from the lowest N terms");
  c_dct->add_option("--out", dct.out, "CSV output path (default stdout)");

  PropagateArgs prop;
  auto* c_prop = app.add_subcommand("propagate", "Repeated convolution + activation");
  c_prop->add_option("--pattern", prop.pattern, "impulse | circle")->capture_default_str();
  c_prop->add_option("--radius", prop.radius, "Circle radius")->capture_default_str();
  c_prop->add_option("--kernel", prop.kernel, "Kernel file or built-in: " + builtin_names());
  c_prop->add_option("--size", prop.size, "Kernel size for --beta-sq mixing (2, 3 or 5)");
  c_prop->add_option("--beta-sq", prop.beta_sq, "Mix unit DC and unit x-gradient at this ratio");
  c_prop->add_option("--schedule", prop.schedule, "constant | alternating | embedded2x2")
      ->capture_default_str();
  c_prop->add_option("--activation", prop.activation, "relu | identity | modulus")
      ->capture_default_str();
  c_prop->add_option("--steps", prop.steps, "Number of layers")->capture_default_str();
  c_prop->add_option("--mode", prop.mode, "full | row (centroid measurement)")->capture_default_str();
  c_prop->add_option("--trace", prop.trace, "Trace CSV output");
  c_prop->add_option("--frames-dir", prop.frames_dir, "Directory for PGM frames");
  c_prop->add_option("--frames-csv", prop.frames_csv, "CSV of nonzero frame cells");

  SweepArgs sw;
  auto* c_sw = app.add_subcommand("sweep", "Measured vs predicted (v/c)^2 over a beta^2 grid");
  c_sw->add_option("--size", sw.sizes, "Kernel sizes (2 uses the 2x2 embedding)")
      ->delimiter(',')
      ->check(CLI::IsMember({2, 3, 5}));
  c_sw->add_option("--activation", sw.activations, "relu | identity | modulus")->delimiter(',');
  c_sw->add_option("--schedule", sw.schedule, "constant | alternating")->capture_default_str();
  c_sw->add_option("--grid", sw.grid, "Number of beta^2 grid points")
      ->check(CLI::Range(2, 10001))
      ->capture_default_str();
  c_sw->add_option("--steps", sw.steps, "Layers per run (>= 16)")->capture_default_str();
  c_sw->add_option("--estimator", sw.estimator, "mean | fit")->capture_default_str();
  c_sw->add_option("--out", sw.out, "CSV output path (default stdout)");
  c_sw->add_option("--gnuplot", sw.gnuplot, "Gnuplot data file output");
  c_sw->add_option("--threads", sw.threads, "Worker threads (default EIM_THREADS or all cores)");

  SpectraArgs sp;
  auto* c_sp = app.add_subcommand("spectra", "Mean DCT energy distribution per layer");
  c_sp->add_option("--tensor", sp.tensors, "EIM tensor file(s)")->required();
  c_sp->add_option("--out", sp.out, "CSV output path (default stdout)");
  c_sp->add_flag("--energy-weighted", sp.energy_weighted, "Weight kernels by energy");

  TruncateArgs tr;
  auto* c_tr = app.add_subcommand("truncate", "Keep only the lowest N DCT components");
  c_tr->add_option("--tensor", tr.tensor, "Input EIM tensor")->required();
  c_tr->add_option("--keep", tr.keep, "Number of components kept")->required();
  c_tr->add_option("--out", tr.out, "Output tensor (.json or .eimt)")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (c_dec->parsed()) cmd_decompose(dec, out);
    else if (c_dct->parsed()) cmd_dct(dct, out);
    else if (c_prop->parsed()) cmd_propagate(prop, out);
    else if (c_sw->parsed()) cmd_sweep(sw, out);
    else if (c_sp->parsed()) cmd_spectra(sp, out);
    else if (c_tr->parsed()) cmd_truncate(tr, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace eim
