#include "eim/spectra.hpp"

#include <ostream>
#include <string>

#include "eim/csv.hpp"
#include "eim/error.hpp"

namespace eim {

LayerSpectrum layer_spectrum(const WeightTensor& tensor, Weighting weighting) {
  const auto& shape = tensor.shape();
  if (shape.k > 16) throw RangeError("layer_spectrum: kernel size above 16");
  const DctBasis basis(shape.k);

  LayerSpectrum out;
  out.name = tensor.name();
  out.k = shape.k;
  for (const auto& item : basis.items()) out.index.emplace_back(item.u, item.v);
  out.mean_fraction.assign(basis.count(), 0.0);

  // Fixed summation order (c_out outer, c_in inner) keeps the result reproducible.
  double total_weight = 0.0;
  for (std::size_t co = 0; co < shape.c_out; ++co) {
    for (std::size_t ci = 0; ci < shape.c_in; ++ci) {
      const CoeffVector omega = project(tensor.kernel(ci, co), basis);
      const double energy = omega.energy();
      if (!(energy > 0.0)) {
        ++out.kernels_skipped;
        continue;
      }
      const double w = weighting == Weighting::Energy ? energy : 1.0;
      const auto frac = energy_distribution(omega);
      for (std::size_t i = 0; i < frac.size(); ++i) out.mean_fraction[i] += w * frac[i];
      total_weight += w;
      ++out.kernels_used;
    }
  }
  if (out.kernels_used == 0) throw DomainError("layer '" + out.name + "' has only zero kernels");

  for (double& f : out.mean_fraction) f /= total_weight;
  for (std::size_t i = 0; i < out.index.size(); ++i) {
    const auto [u, v] = out.index[i];
    if (u + v == 0)
      out.dc_fraction += out.mean_fraction[i];
    else if (u + v == 1)
      out.gradient_fraction += out.mean_fraction[i];
    else
      out.higher_fraction += out.mean_fraction[i];
  }
  return out;
}

WeightTensor truncate_tensor(const WeightTensor& tensor, std::size_t n_keep) {
  const auto& shape = tensor.shape();
  const DctBasis basis(shape.k);
  if (n_keep < 1 || n_keep > basis.count())
    throw RangeError("truncate: n_keep must be in [1, " + std::to_string(basis.count()) + "]");
  WeightTensor out(tensor.name(), shape);
  for (std::size_t co = 0; co < shape.c_out; ++co)
    for (std::size_t ci = 0; ci < shape.c_in; ++ci)
      out.set_kernel(ci, co, reconstruct(project(tensor.kernel(ci, co), basis), basis, n_keep));
  return out;
}

void write_spectrum_csv(std::ostream& os, std::span<const LayerSpectrum> layers) {
  os << "layer_name,u,v,mean_energy_fraction\n";
  for (const auto& layer : layers)
    for (std::size_t i = 0; i < layer.index.size(); ++i)
      os << layer.name << ',' << layer.index[i].first << ',' << layer.index[i].second << ','
         << fmt_num(layer.mean_fraction[i]) << '\n';
}

}  // namespace eim
