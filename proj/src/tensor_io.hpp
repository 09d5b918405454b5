#ifndef FACECAP_TENSOR_IO_HPP_
#define FACECAP_TENSOR_IO_HPP_

#include <Eigen/Core>
#include <string>
#include <vector>

#include "common.hpp"

namespace facecap {

// Binary tensor container: a JSON header followed by named dense tensors.
// Used for feature artifacts and model checkpoints. Little-endian host only.
//
//   magic "FCTB" | u32 version | u64 json_len | json bytes
//   u32 n_tensors | per tensor: u32 name_len, name, u8 dtype (0=f64, 1=f32),
//   u32 ndim, u64 dims..., payload
struct NamedTensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<double> data;  // row-major

  std::size_t elems() const {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
  }
};

struct TensorFile {
  std::string header_json;
  std::vector<NamedTensor> tensors;

  const NamedTensor* find(const std::string& name) const;
  const NamedTensor& require(const std::string& name) const;
};

void write_tensor_file(const std::string& path, const TensorFile& file, bool as_f32 = false);
TensorFile read_tensor_file(const std::string& path);

NamedTensor tensor_from_matrix(const std::string& name, const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_tensor(const NamedTensor& t);

}  // namespace facecap

#endif  // FACECAP_TENSOR_IO_HPP_
