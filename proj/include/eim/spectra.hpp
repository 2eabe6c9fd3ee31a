#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "eim/dctspec.hpp"
#include "eim/tensor.hpp"

namespace eim {

enum class Weighting {
  Uniform,  // every nonzero kernel contributes its distribution equally
  Energy,   // distributions weighted by kernel energy
};

/// Mean DCT energy distribution of one layer.
struct LayerSpectrum {
  std::string name;
  std::size_t k = 0;
  /// (u, v) per entry, in DctBasis order.
  std::vector<std::pair<std::size_t, std::size_t>> index;
  std::vector<double> mean_fraction;
  double dc_fraction = 0.0;        // (0,0)
  double gradient_fraction = 0.0;  // (0,1) + (1,0)
  double higher_fraction = 0.0;    // everything else
  std::size_t kernels_used = 0;
  std::size_t kernels_skipped = 0;  // zero-energy kernels
};

/// Throws RangeError for k > 16 and DomainError if every kernel is zero.
LayerSpectrum layer_spectrum(const WeightTensor& tensor, Weighting weighting = Weighting::Uniform);

/// Keeps the lowest n_keep DCT components of every kernel (1 <= n_keep <= k^2).
WeightTensor truncate_tensor(const WeightTensor& tensor, std::size_t n_keep);

/// layer_name,u,v,mean_energy_fraction
void write_spectrum_csv(std::ostream& os, std::span<const LayerSpectrum> layers);

}  // namespace eim
