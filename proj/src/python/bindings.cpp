#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <string>

#include "eim/dctspec.hpp"
#include "eim/error.hpp"
#include "eim/kernelspace.hpp"
#include "eim/propagator.hpp"
#include "eim/relativity.hpp"
#include "eim/spectra.hpp"
#include "eim/tensor.hpp"

namespace py = pybind11;
using namespace eim;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

Kernel2D to_kernel(const Array& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw ShapeError("kernel must be a square 2D array");
  const auto k = static_cast<std::size_t>(a.shape(0));
  return Kernel2D(k, std::vector<double>(a.data(), a.data() + k * k));
}

Array to_array(const Kernel2D& k) {
  Array out({k.size(), k.size()});
  std::copy(k.values().begin(), k.values().end(), out.mutable_data());
  return out;
}

Array to_array(const std::vector<double>& v) {
  Array out(v.size());
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

StandardKernel parse_standard(const std::string& name, double theta) {
  if (name == "dc") return kernels::Dc{};
  if (name == "gradx") return kernels::GradX{};
  if (name == "grady") return kernels::GradY{};
  if (name == "gradtheta") return kernels::GradTheta{theta};
  if (name == "offset") return kernels::OffsetImpulse{};
  throw RangeError("unknown standard kernel '" + name + "'");
}

Schedule to_schedule(const py::object& kernels, bool alternate) {
  if (py::isinstance<py::list>(kernels) || py::isinstance<py::tuple>(kernels)) {
    const auto seq = kernels.cast<std::vector<Array>>();
    if (seq.size() != 2) throw RangeError("a kernel schedule list must have exactly 2 kernels");
    return Schedule::alternating(to_kernel(seq[0]), to_kernel(seq[1]));
  }
  const Kernel2D k = to_kernel(kernels.cast<Array>());
  return alternate ? Schedule::alternating_odd(k) : Schedule::constant(k);
}

WeightTensor to_tensor(const FloatArray& a, const std::string& name) {
  // numpy layout (c_out, c_in, k, k) matches the canonical x-fastest order.
  if (a.ndim() != 4 || a.shape(2) != a.shape(3)) throw ShapeError("tensor must have shape (c_out, c_in, k, k)");
  const TensorShape s{static_cast<std::size_t>(a.shape(2)), static_cast<std::size_t>(a.shape(1)),
                      static_cast<std::size_t>(a.shape(0))};
  return WeightTensor(name, s, std::vector<float>(a.data(), a.data() + s.value_count()));
}

FloatArray from_tensor(const WeightTensor& t) {
  const auto& s = t.shape();
  FloatArray out({s.c_out, s.c_in, s.k, s.k});
  std::copy(t.data().begin(), t.data().end(), out.mutable_data());
  return out;
}

py::dict spectrum_dict(const LayerSpectrum& s) {
  py::dict d;
  d["name"] = s.name;
  d["k"] = s.k;
  d["index"] = s.index;
  d["mean_fraction"] = to_array(s.mean_fraction);
  d["dc_fraction"] = s.dc_fraction;
  d["gradient_fraction"] = s.gradient_fraction;
  d["higher_fraction"] = s.higher_fraction;
  d["kernels_used"] = s.kernels_used;
  d["kernels_skipped"] = s.kernels_skipped;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Even/odd kernel decomposition, DCT spectra and propagation";

  py::register_exception<Error>(m, "EimError", PyExc_ValueError);

  m.def("decompose", [](const Array& kernel) {
    const auto s = decompose(to_kernel(kernel));
    py::dict d;
    d["even"] = to_array(s.even);
    d["odd"] = to_array(s.odd);
    d["energy_even"] = s.energy_even;
    d["energy_odd"] = s.energy_odd;
    d["beta_sq"] = s.beta_sq;
    return d;
  }, py::arg("kernel"), "Dihedral even/odd split of a square kernel.");

  m.def("dihedral_average", [](const Array& k) { return to_array(dihedral_average(to_kernel(k))); },
        py::arg("kernel"));

  m.def("mix", [](const Array& even, const Array& odd, double beta, double magnitude) {
    return to_array(mix(to_kernel(even), to_kernel(odd), beta, magnitude));
  }, py::arg("even_unit"), py::arg("odd_unit"), py::arg("beta"), py::arg("magnitude") = 1.0);

  m.def("standard_kernel", [](const std::string& name, std::size_t k, double theta) {
    return to_array(standard_kernel(parse_standard(name, theta), k));
  }, py::arg("name"), py::arg("k"), py::arg("theta") = 0.0,
     "name is one of dc, gradx, grady, gradtheta, offset.");

  m.def("lorentz_gamma", &lorentz_gamma, py::arg("beta"));

  m.def("dct_basis", [](std::size_t k) {
    py::list out;
    const DctBasis basis(k);
    for (const auto& it : basis.items())
      out.append(py::make_tuple(it.u, it.v, std::string(to_string(it.sym_class)), to_array(it.basis)));
    return out;
  }, py::arg("k"), "List of (u, v, sym_class, basis) in low-frequency-first order.");

  m.def("project", [](const Array& kernel) {
    const Kernel2D k = to_kernel(kernel);
    return to_array(project(k, DctBasis(k.size())).omega);
  }, py::arg("kernel"));

  m.def("reconstruct", [](const Array& omega, std::size_t k, std::size_t n_keep) {
    if (omega.ndim() != 1) throw ShapeError("coefficients must be 1D");
    CoeffVector c{k, std::vector<double>(omega.data(), omega.data() + omega.shape(0))};
    return to_array(reconstruct(c, DctBasis(k), n_keep));
  }, py::arg("omega"), py::arg("k"), py::arg("n_keep"));

  m.def("propagate", [](const py::object& kernels, std::size_t steps, const std::string& act,
                        const std::string& pattern, double radius, bool alternate, bool full2d,
                        bool keep_frames) {
    const Schedule schedule = to_schedule(kernels, alternate);
    Pattern p;
    if (pattern == "impulse") p = Pattern::impulse();
    else if (pattern == "circle") p = Pattern::circle(radius);
    else throw RangeError("pattern must be impulse or circle");
    RunOptions opt;
    opt.mode = full2d ? MeasureMode::Full2D : MeasureMode::CentralRow;
    opt.keep_frames = keep_frames;
    PropagationTrace tr;
    {
      py::gil_scoped_release release;
      tr = run(p, schedule, steps, parse_activation(act), opt);
    }
    const std::size_t n = tr.records.size();
    Array t(n), cx(n), cy(n), sx(n), mass(n);
    for (std::size_t i = 0; i < n; ++i) {
      t.mutable_data()[i] = static_cast<double>(tr.records[i].t);
      cx.mutable_data()[i] = tr.records[i].centroid_x;
      cy.mutable_data()[i] = tr.records[i].centroid_y;
      sx.mutable_data()[i] = tr.records[i].sigma_x;
      mass.mutable_data()[i] = tr.records[i].mass;
    }
    py::dict d;
    d["t"] = t;
    d["centroid_x"] = cx;
    d["centroid_y"] = cy;
    d["sigma_x"] = sx;
    d["mass"] = mass;
    if (keep_frames) {
      py::list frames;
      for (const auto& f : tr.frames) {
        Array a({f.height(), f.width()});
        std::copy(f.values().begin(), f.values().end(), a.mutable_data());
        frames.append(a);
      }
      d["frames"] = frames;
    }
    return d;
  }, py::arg("kernels"), py::arg("steps"), py::arg("activation") = "relu", py::arg("pattern") = "impulse",
     py::arg("radius") = 0.0, py::arg("alternate") = false, py::arg("full2d") = true,
     py::arg("keep_frames") = false,
     "Run repeated convolution + activation. kernels is one kernel or a pair to alternate.");

  m.def("sweep", [](std::size_t size, const std::string& act, const std::string& schedule, std::size_t grid,
                    std::size_t steps, const std::string& estimator, unsigned threads) {
    SweepConfig cfg;
    cfg.size = size;
    cfg.activation = parse_activation(act);
    cfg.schedule = size == 2 ? ScheduleKind::Embedded2x2 : parse_schedule(schedule);
    cfg.beta_sq_grid = uniform_grid(grid);
    cfg.steps = steps;
    if (estimator == "mean") cfg.estimator = VelocityEstimator::MeanDisplacement;
    else if (estimator == "fit") cfg.estimator = VelocityEstimator::FinalHalfFit;
    else throw RangeError("estimator must be mean or fit");
    cfg.threads = threads;
    SweepTable table;
    {
      py::gil_scoped_release release;
      table = sweep(cfg);
    }
    std::vector<double> b, meas, pred;
    for (const auto& p : table.points) {
      b.push_back(p.beta_sq);
      meas.push_back(p.measured_speed_ratio_sq);
      pred.push_back(p.predicted_speed_ratio_sq);
    }
    const auto rep = lorentz_compare(table);
    py::dict d;
    d["beta_sq"] = to_array(b);
    d["measured_ratio_sq"] = to_array(meas);
    d["predicted_ratio_sq"] = to_array(pred);
    d["max_abs_dev"] = rep.max_abs_dev;
    d["is_monotone"] = rep.is_monotone;
    d["argmax_beta_sq"] = rep.argmax_beta_sq;
    return d;
  }, py::arg("size") = 3, py::arg("activation") = "relu", py::arg("schedule") = "constant",
     py::arg("grid") = 21, py::arg("steps") = 24, py::arg("estimator") = "mean", py::arg("threads") = 0);

  m.def("load_tensor", [](const std::string& path) {
    const WeightTensor t = load_tensor(path);
    return py::make_tuple(t.name(), from_tensor(t));
  }, py::arg("path"), "Returns (name, array of shape (c_out, c_in, k, k)).");

  m.def("save_tensor", [](const std::string& path, const FloatArray& a, const std::string& name) {
    save_tensor(to_tensor(a, name), path);
  }, py::arg("path"), py::arg("array"), py::arg("name") = "");

  m.def("layer_spectrum", [](const FloatArray& a, const std::string& name, bool energy_weighted) {
    return spectrum_dict(layer_spectrum(to_tensor(a, name), energy_weighted ? Weighting::Energy : Weighting::Uniform));
  }, py::arg("array"), py::arg("name") = "", py::arg("energy_weighted") = false);

  m.def("truncate", [](const FloatArray& a, std::size_t n_keep) {
    return from_tensor(truncate_tensor(to_tensor(a, ""), n_keep));
  }, py::arg("array"), py::arg("n_keep"));
}
