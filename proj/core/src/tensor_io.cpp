// SPDX-License-Identifier: Apache-2.0
#include "abcnet/tensor_io.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "abcnet/error.hpp"

namespace abcnet {
namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<char>((v >> shift) & 0xFF));
}

std::uint32_t get_u32(std::string_view bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
  }
  return v;
}

}  // namespace

std::string encode_tensor(const Tensor& t) {
  if (t.rank() == 0) throw FormatError("TNSR: rank-0 tensors cannot be stored");
  std::string out(kTensorMagic);
  out.push_back(static_cast<char>(kTensorVersion));
  put_u32(out, static_cast<std::uint32_t>(t.rank()));
  for (std::size_t d : t.shape()) {
    if (d > std::numeric_limits<std::uint32_t>::max()) throw FormatError("TNSR: dimension too large");
    put_u32(out, static_cast<std::uint32_t>(d));
  }
  out.reserve(out.size() + 4 * t.size());
  for (double v : t.data()) {
    const auto f = static_cast<float>(v);
    if (!std::isfinite(f)) throw DomainError("TNSR: value not representable as finite float32");
    put_u32(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

Tensor decode_tensor(std::string_view bytes) {
  constexpr std::size_t kFixedHeader = 4 + 1 + 4;
  if (bytes.size() < kFixedHeader) throw IoError("TNSR: corrupt header (file too short)");
  if (bytes.substr(0, 4) != kTensorMagic) throw IoError("TNSR: corrupt header (bad magic)");
  if (static_cast<std::uint8_t>(bytes[4]) != kTensorVersion) {
    throw IoError("TNSR: corrupt header (unsupported version " +
                  std::to_string(static_cast<unsigned char>(bytes[4])) + ")");
  }
  const std::uint32_t rank = get_u32(bytes, 5);
  if (rank == 0) throw FormatError("TNSR: rank-0 tensors are not allowed");
  const std::size_t header = kFixedHeader + 4 * static_cast<std::size_t>(rank);
  if (bytes.size() < header) throw IoError("TNSR: corrupt header (truncated dimensions)");

  const std::size_t max_values = (bytes.size() - header) / 4;
  Shape shape(rank);
  std::size_t volume = 1;
  for (std::uint32_t i = 0; i < rank; ++i) {
    shape[i] = get_u32(bytes, kFixedHeader + 4 * i);
    if (shape[i] == 0) throw FormatError("TNSR: zero-sized dimension");
    if (shape[i] > max_values / volume) {
      throw IoError("TNSR: corrupt payload (dimensions exceed file size)");
    }
    volume *= shape[i];
  }
  if (bytes.size() - header != 4 * volume) {
    throw IoError("TNSR: corrupt payload (expected " + std::to_string(4 * volume) +
                  " bytes, found " + std::to_string(bytes.size() - header) + ")");
  }

  std::vector<double> data(volume);
  for (std::size_t i = 0; i < volume; ++i) {
    const float f = std::bit_cast<float>(get_u32(bytes, header + 4 * i));
    if (!std::isfinite(f)) throw IoError("TNSR: corrupt payload (non-finite value)");
    data[i] = f;
  }
  return Tensor(std::move(shape), std::move(data));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return std::move(buffer).str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

void write_tensor(const std::filesystem::path& path, const Tensor& t) {
  write_file(path, encode_tensor(t));
}

Tensor read_tensor(const std::filesystem::path& path) { return decode_tensor(read_file(path)); }

}  // namespace abcnet
