// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "abcnet/error.hpp"

namespace abcnet {

using Shape = std::vector<std::size_t>;

inline std::size_t shape_volume(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_to_string(const Shape& shape);

/// Dense row-major array. Every dimension is positive and the data length
/// always equals the product of the shape.
template <typename T>
class BasicTensor {
 public:
  BasicTensor() = default;

  explicit BasicTensor(Shape shape, T fill = T{}) : shape_(std::move(shape)) {
    validate_shape();
    data_.assign(shape_volume(shape_), fill);
  }

  BasicTensor(Shape shape, std::vector<T> data) : shape_(std::move(shape)), data_(std::move(data)) {
    validate_shape();
    if (data_.size() != shape_volume(shape_)) {
      throw DimensionError("tensor: " + std::to_string(data_.size()) +
                           " values do not fill shape " + shape_to_string(shape_));
    }
  }

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  // Rank-2 and rank-3 accessors; no bounds checks.
  T& at(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
  const T& at(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }
  T& at(std::size_t c, std::size_t y, std::size_t x) {
    return data_[(c * shape_[1] + y) * shape_[2] + x];
  }
  const T& at(std::size_t c, std::size_t y, std::size_t x) const {
    return data_[(c * shape_[1] + y) * shape_[2] + x];
  }

  friend bool operator==(const BasicTensor&, const BasicTensor&) = default;

 private:
  void validate_shape() const {
    for (std::size_t d : shape_) {
      if (d == 0) throw DimensionError("tensor: zero-sized dimension in " + shape_to_string(shape_));
    }
  }

  Shape shape_;
  std::vector<T> data_;
};

using Tensor = BasicTensor<double>;
using IndexTensor = BasicTensor<std::int64_t>;

/// Throws DimensionError unless t has the given rank.
void require_rank(const Tensor& t, std::size_t rank, const char* op);

/// Throws DomainError if any element is NaN or infinite.
void require_finite(const Tensor& t, const char* op);

/// Plain triple-loop product of two rank-2 tensors.
Tensor matmul(const Tensor& a, const Tensor& b);

}  // namespace abcnet
