// SPDX-License-Identifier: Apache-2.0
#include "abcnet/tensor.hpp"

#include <cmath>

namespace abcnet {

std::string shape_to_string(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

void require_rank(const Tensor& t, std::size_t rank, const char* op) {
  if (t.rank() != rank) {
    throw DimensionError(std::string(op) + ": expected rank " + std::to_string(rank) +
                         ", got shape " + shape_to_string(t.shape()));
  }
}

void require_finite(const Tensor& t, const char* op) {
  for (double v : t.data()) {
    if (!std::isfinite(v)) throw DomainError(std::string(op) + ": non-finite tensor value");
  }
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_rank(a, 2, "matmul");
  require_rank(b, 2, "matmul");
  if (a.dim(1) != b.dim(0)) {
    throw DimensionError("matmul: inner dimensions differ (" + shape_to_string(a.shape()) +
                         " x " + shape_to_string(b.shape()) + ")");
  }
  const std::size_t rows = a.dim(0);
  const std::size_t inner = a.dim(1);
  const std::size_t cols = b.dim(1);
  Tensor out({rows, cols});
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < inner; ++k) acc += a.at(i, k) * b.at(k, j);
      out.at(i, j) = acc;
    }
  }
  return out;
}

}  // namespace abcnet
