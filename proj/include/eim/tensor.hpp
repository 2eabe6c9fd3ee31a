#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "eim/kernel.hpp"

namespace eim {

struct TensorShape {
  std::size_t k = 0;
  std::size_t c_in = 0;
  std::size_t c_out = 0;

  std::size_t kernel_count() const { return c_in * c_out; }
  std::size_t value_count() const { return k * k * c_in * c_out; }
  friend bool operator==(const TensorShape&, const TensorShape&) = default;
};

/// 4D convolution weights [k, k, c_in, c_out] at 32-bit precision, stored in
/// canonical order: x fastest, then y, then c_in, then c_out.
class WeightTensor {
 public:
  WeightTensor() = default;
  /// Throws ShapeError on a zero dimension or a value count mismatch and
  /// FormatError on non-finite values.
  WeightTensor(std::string name, TensorShape shape, std::vector<float> data);
  /// Zero-filled tensor.
  WeightTensor(std::string name, TensorShape shape);

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  const TensorShape& shape() const { return shape_; }
  const std::vector<float>& data() const { return data_; }

  Kernel2D kernel(std::size_t c_in, std::size_t c_out) const;
  /// Stores a kernel, rounding to float.
  void set_kernel(std::size_t c_in, std::size_t c_out, const Kernel2D& kernel);

  friend bool operator==(const WeightTensor&, const WeightTensor&) = default;

 private:
  std::size_t offset(std::size_t c_in, std::size_t c_out) const;

  std::string name_;
  TensorShape shape_;
  std::vector<float> data_;
};

/// Canonical JSON document:
/// {"format":"eim-tensor","version":1,"name":...,"shape":[k,k,c_in,c_out],
///  "order":"x-fastest","dtype":"f32","data":[...]}
std::string to_tensor_json(const WeightTensor& tensor);
WeightTensor parse_tensor_json(std::string_view text);

/// Binary companion: "EIMT", u32 version, u32 ndim, ndim u32 dims, then
/// little-endian f32 values. The name is not stored.
void write_tensor_binary(std::ostream& os, const WeightTensor& tensor);
WeightTensor read_tensor_binary(std::istream& is, std::string name = {});

enum class TensorFormat { Json, Binary };

/// Binary for .eimt/.bin extensions, JSON otherwise.
TensorFormat format_for_path(const std::filesystem::path& path);

/// Detects the format from the leading bytes. A binary file takes its name
/// from the file stem.
WeightTensor load_tensor(const std::filesystem::path& path);
void save_tensor(const WeightTensor& tensor, const std::filesystem::path& path);
void save_tensor(const WeightTensor& tensor, const std::filesystem::path& path, TensorFormat fmt);

/// Single kernels are tensors of shape [k, k, 1, 1].
Kernel2D load_kernel(const std::filesystem::path& path);
void save_kernel(const Kernel2D& kernel, const std::filesystem::path& path,
                 std::string name = "kernel");

}  // namespace eim
