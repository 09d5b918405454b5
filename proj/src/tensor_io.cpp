#include "tensor_io.hpp"

#include <cstring>
#include <fstream>

namespace facecap {

namespace {

constexpr char kMagic[4] = {'F', 'C', 'T', 'B'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, const std::string& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IoError("truncated tensor file: " + path);
  return v;
}

}  // namespace

const NamedTensor* TensorFile::find(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const NamedTensor& TensorFile::require(const std::string& name) const {
  const NamedTensor* t = find(name);
  if (!t) throw DataError("tensor missing from container: " + name);
  return *t;
}

void write_tensor_file(const std::string& path, const TensorFile& file, bool as_f32) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write tensor file: " + path);
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint64_t>(out, file.header_json.size());
  out.write(file.header_json.data(), static_cast<std::streamsize>(file.header_json.size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(file.tensors.size()));
  for (const auto& t : file.tensors) {
    if (t.elems() != t.data.size())
      throw InputError("tensor shape/data mismatch for " + t.name);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    put<std::uint8_t>(out, as_f32 ? 1 : 0);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.shape.size()));
    for (std::size_t d : t.shape) put<std::uint64_t>(out, d);
    if (as_f32) {
      std::vector<float> buf(t.data.begin(), t.data.end());
      out.write(reinterpret_cast<const char*>(buf.data()),
                static_cast<std::streamsize>(buf.size() * sizeof(float)));
    } else {
      out.write(reinterpret_cast<const char*>(t.data.data()),
                static_cast<std::streamsize>(t.data.size() * sizeof(double)));
    }
  }
  if (!out) throw IoError("short write: " + path);
}

TensorFile read_tensor_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open tensor file: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw DataError("not a tensor container: " + path);
  const auto version = get<std::uint32_t>(in, path);
  if (version != kVersion)
    throw DataError("unsupported tensor container version in " + path);
  const auto json_len = get<std::uint64_t>(in, path);
  TensorFile file;
  file.header_json.resize(json_len);
  in.read(file.header_json.data(), static_cast<std::streamsize>(json_len));
  if (!in) throw IoError("truncated tensor file: " + path);
  const auto n = get<std::uint32_t>(in, path);
  file.tensors.resize(n);
  for (auto& t : file.tensors) {
    const auto name_len = get<std::uint32_t>(in, path);
    t.name.resize(name_len);
    in.read(t.name.data(), name_len);
    const auto dtype = get<std::uint8_t>(in, path);
    const auto ndim = get<std::uint32_t>(in, path);
    t.shape.resize(ndim);
    for (auto& d : t.shape) d = static_cast<std::size_t>(get<std::uint64_t>(in, path));
    t.data.resize(t.elems());
    if (dtype == 1) {
      std::vector<float> buf(t.elems());
      in.read(reinterpret_cast<char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
      if (!in) throw IoError("truncated tensor file: " + path);
      for (std::size_t i = 0; i < buf.size(); ++i) t.data[i] = buf[i];
    } else if (dtype == 0) {
      in.read(reinterpret_cast<char*>(t.data.data()),
              static_cast<std::streamsize>(t.data.size() * sizeof(double)));
      if (!in) throw IoError("truncated tensor file: " + path);
    } else {
      throw DataError("unknown tensor dtype in " + path);
    }
  }
  return file;
}

NamedTensor tensor_from_matrix(const std::string& name, const Eigen::MatrixXd& m) {
  NamedTensor t;
  t.name = name;
  t.shape = {static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())};
  t.data.resize(t.elems());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      t.data[static_cast<std::size_t>(r) * m.cols() + c] = m(r, c);
  return t;
}

Eigen::MatrixXd matrix_from_tensor(const NamedTensor& t) {
  if (t.shape.size() != 2) throw DataError("tensor is not a matrix: " + t.name);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(t.shape[0]), static_cast<Eigen::Index>(t.shape[1]));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      m(r, c) = t.data[static_cast<std::size_t>(r) * m.cols() + c];
  return m;
}

}  // namespace facecap
