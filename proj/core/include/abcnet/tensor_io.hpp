// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "abcnet/tensor.hpp"

namespace abcnet {

/// TNSR binary layout, all integers little-endian:
///   "TNSR" | u8 version (= 1) | u32 rank | rank x u32 dims |
///   product(dims) x IEEE-754 float32, row-major.
inline constexpr std::string_view kTensorMagic = "TNSR";
inline constexpr std::uint8_t kTensorVersion = 1;

/// Serializes to float32. Throws FormatError for rank-0 tensors and
/// DomainError for values that are not finite in float32.
std::string encode_tensor(const Tensor& t);

/// Throws IoError on a bad magic, version, or payload length and
/// FormatError on rank 0.
Tensor decode_tensor(std::string_view bytes);

void write_tensor(const std::filesystem::path& path, const Tensor& t);
Tensor read_tensor(const std::filesystem::path& path);

/// Whole-file helpers shared by the readers and writers; IoError on failure.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace abcnet
