#include "eim/tensor.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <json.hpp>
#include <ostream>

#include "eim/error.hpp"

namespace eim {

namespace {

constexpr std::uint32_t kVersion = 1;
constexpr char kMagic[4] = {'E', 'I', 'M', 'T'};

void require_shape(const TensorShape& s) {
  if (s.k == 0 || s.c_in == 0 || s.c_out == 0) throw ShapeError("tensor dimensions must be positive");
}

void put_u32(std::ostream& os, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                              static_cast<char>((v >> 16) & 0xff),
                              static_cast<char>((v >> 24) & 0xff)};
  os.write(b.data(), 4);
}

std::uint32_t get_u32(std::istream& is) {
  std::array<unsigned char, 4> b{};
  if (!is.read(reinterpret_cast<char*>(b.data()), 4)) throw FormatError("truncated binary tensor");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

TensorShape shape_from_dims(const std::vector<std::uint64_t>& dims) {
  if (dims.size() != 4) throw ShapeError("tensor shape must have 4 dimensions");
  for (auto d : dims)
    if (d == 0) throw ShapeError("tensor dimensions must be positive");
  if (dims[0] != dims[1]) throw ShapeError("tensor kernels must be square");
  return {static_cast<std::size_t>(dims[0]), static_cast<std::size_t>(dims[2]),
          static_cast<std::size_t>(dims[3])};
}

}  // namespace

WeightTensor::WeightTensor(std::string name, TensorShape shape, std::vector<float> data)
    : name_(std::move(name)), shape_(shape), data_(std::move(data)) {
  require_shape(shape_);
  if (data_.size() != shape_.value_count())
    throw ShapeError("tensor value count " + std::to_string(data_.size()) + " does not match shape (" +
                     std::to_string(shape_.value_count()) + " expected)");
  for (float v : data_)
    if (!std::isfinite(v)) throw FormatError("tensor contains a non-finite value");
}

WeightTensor::WeightTensor(std::string name, TensorShape shape)
    : WeightTensor(std::move(name), shape, std::vector<float>(shape.value_count(), 0.0f)) {}

std::size_t WeightTensor::offset(std::size_t c_in, std::size_t c_out) const {
  if (c_in >= shape_.c_in || c_out >= shape_.c_out) throw RangeError("channel index out of range");
  return (c_out * shape_.c_in + c_in) * shape_.k * shape_.k;
}

Kernel2D WeightTensor::kernel(std::size_t c_in, std::size_t c_out) const {
  const std::size_t off = offset(c_in, c_out);
  const std::size_t n = shape_.k * shape_.k;
  return Kernel2D(shape_.k, std::vector<double>(data_.begin() + static_cast<std::ptrdiff_t>(off),
                                                data_.begin() + static_cast<std::ptrdiff_t>(off + n)));
}

void WeightTensor::set_kernel(std::size_t c_in, std::size_t c_out, const Kernel2D& kernel) {
  if (kernel.size() != shape_.k) throw ShapeError("kernel size does not match tensor");
  const std::size_t off = offset(c_in, c_out);
  for (std::size_t i = 0; i < kernel.count(); ++i)
    data_[off + i] = static_cast<float>(kernel.values()[i]);
}

std::string to_tensor_json(const WeightTensor& tensor) {
  const auto& s = tensor.shape();
  nlohmann::ordered_json doc;
  doc["format"] = "eim-tensor";
  doc["version"] = kVersion;
  doc["name"] = tensor.name();
  doc["shape"] = {s.k, s.k, s.c_in, s.c_out};
  doc["order"] = "x-fastest";
  doc["dtype"] = "f32";
  doc["data"] = tensor.data();
  return doc.dump() + "\n";
}

WeightTensor parse_tensor_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed tensor JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || doc.value("format", "") != "eim-tensor")
      throw FormatError("not an eim-tensor document");
    if (doc.at("version").get<int>() != static_cast<int>(kVersion))
      throw FormatError("unsupported eim-tensor version");
    if (doc.value("order", "x-fastest") != "x-fastest")
      throw FormatError("unsupported value order");
    if (doc.value("dtype", "f32") != "f32") throw FormatError("unsupported dtype");

    const auto& shape = doc.at("shape");
    if (!shape.is_array()) throw FormatError("shape must be an array");
    std::vector<std::uint64_t> dims;
    for (const auto& d : shape) {
      if (!d.is_number_integer() || d.get<std::int64_t>() < 0)
        throw ShapeError("shape entries must be nonnegative integers");
      dims.push_back(d.get<std::uint64_t>());
    }
    const TensorShape s = shape_from_dims(dims);

    const auto& data = doc.at("data");
    if (!data.is_array()) throw FormatError("data must be an array");
    std::vector<float> values;
    values.reserve(data.size());
    for (const auto& v : data) {
      if (!v.is_number()) throw FormatError("data entries must be numbers");
      const float f = static_cast<float>(v.get<double>());
      if (!std::isfinite(f)) throw FormatError("tensor contains a non-finite value");
      values.push_back(f);
    }
    return WeightTensor(doc.value("name", ""), s, std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed tensor header: ") + e.what());
  }
}

void write_tensor_binary(std::ostream& os, const WeightTensor& tensor) {
  const auto& s = tensor.shape();
  os.write(kMagic, 4);
  put_u32(os, kVersion);
  put_u32(os, 4);
  for (std::size_t d : {s.k, s.k, s.c_in, s.c_out}) put_u32(os, static_cast<std::uint32_t>(d));
  for (float v : tensor.data()) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    put_u32(os, bits);
  }
}

WeightTensor read_tensor_binary(std::istream& is, std::string name) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError("missing EIMT magic");
  if (get_u32(is) != kVersion) throw FormatError("unsupported binary tensor version");
  const std::uint32_t ndim = get_u32(is);
  if (ndim != 4) throw ShapeError("binary tensor must have 4 dimensions");
  std::vector<std::uint64_t> dims;
  for (std::uint32_t i = 0; i < ndim; ++i) dims.push_back(get_u32(is));
  const TensorShape s = shape_from_dims(dims);
  std::vector<float> values(s.value_count());
  for (float& v : values) {
    const std::uint32_t bits = get_u32(is);
    std::memcpy(&v, &bits, sizeof v);
  }
  if (is.peek() != std::char_traits<char>::eof())
    throw ShapeError("binary tensor has more values than its shape declares");
  return WeightTensor(std::move(name), s, std::move(values));
}

TensorFormat format_for_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return ext == ".eimt" || ext == ".bin" ? TensorFormat::Binary : TensorFormat::Json;
}

WeightTensor load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  char head[4] = {};
  in.read(head, 4);
  const bool binary = in.gcount() == 4 && std::memcmp(head, kMagic, 4) == 0;
  in.clear();
  in.seekg(0);
  if (binary) return read_tensor_binary(in, path.stem().string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_tensor_json(text);
}

void save_tensor(const WeightTensor& tensor, const std::filesystem::path& path) {
  save_tensor(tensor, path, format_for_path(path));
}

void save_tensor(const WeightTensor& tensor, const std::filesystem::path& path, TensorFormat fmt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  if (fmt == TensorFormat::Binary)
    write_tensor_binary(out, tensor);
  else
    out << to_tensor_json(tensor);
  if (!out) throw FormatError("write failed for " + path.string());
}

Kernel2D load_kernel(const std::filesystem::path& path) {
  const WeightTensor t = load_tensor(path);
  if (t.shape().kernel_count() != 1)
    throw ShapeError("kernel file must have shape [k,k,1,1]");
  return t.kernel(0, 0);
}

void save_kernel(const Kernel2D& kernel, const std::filesystem::path& path, std::string name) {
  WeightTensor t(std::move(name), {kernel.size(), 1, 1});
  t.set_kernel(0, 0, kernel);
  save_tensor(t, path);
}

}  // namespace eim
