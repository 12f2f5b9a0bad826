// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "abcnet/tensor.hpp"

namespace abcnet {

/// Bit width and clip ranges shared by every element of one activation and
/// one weight tensor. levels() == 2^bits.
struct QuantSpec {
  int bits = 4;
  double alpha_a = 1.0;
  double alpha_w = 1.0;

  std::int64_t levels() const { return std::int64_t{1} << bits; }
  /// Throws DomainError unless 1 <= bits <= 31 and both alphas are positive
  /// and finite.
  void validate() const;
};

struct QuantResult {
  Tensor q;       // dequantized values
  IndexTensor z;  // integer levels in [0, l - 1]
};

struct QuantValue {
  double q = 0.0;
  std::int64_t z = 0;
};

/// Activation quantizer: clip to [0, alpha_a], map to the nearest of l levels
/// (ties away from zero), rescale.
QuantValue quant_act_value(double x, const QuantSpec& spec);
QuantResult quant_act(const Tensor& x, const QuantSpec& spec);

/// Weight quantizer: clip x / alpha_w to [-1, 1], shift to [0, 1], take the
/// nearest of l levels, map back to the symmetric grid
/// (2z - (l - 1)) * alpha_w / (l - 1).
QuantValue quant_weight_value(double x, const QuantSpec& spec);
QuantResult quant_weight(const Tensor& x, const QuantSpec& spec);

/// Straight-through derivatives: the rounding step passes gradient 1, the
/// clip passes 1 inside the closed range and 0 outside it.
double ste_grad_act(double x, const QuantSpec& spec);
double ste_grad_weight(double x, const QuantSpec& spec);

struct IntMatmulCheck {
  Tensor float_path;
  Tensor int_path;
  double max_abs_diff = 0.0;
};

/// Compares Q(Xa) Q(Xw) with the reordered product
/// (Za (2 Zw - (l - 1))) * alpha_a alpha_w / (l - 1)^2, whose sum is computed
/// in 64-bit integers. Throws OverflowError when (l - 1)^2 * K could leave
/// the int64 range.
IntMatmulCheck int_matmul_check(const Tensor& activations, const Tensor& weights,
                                const QuantSpec& spec);

/// Sum of squared quantization errors of the activation (or weight)
/// quantizer over x.
double quantization_error(std::span<const double> x, const QuantSpec& spec, bool weights = false);

/// Candidate alpha with the smallest quantization_error; the first one wins
/// ties. Stands in for the learned clip value when analysing a tensor.
double search_alpha(std::span<const double> x, int bits, std::span<const double> candidates,
                    bool weights = false);

/// 32 / bits, for 1 <= bits <= 32.
double memory_saving(int bits);

/// Operation name -> picojoules.
using EnergyTable = std::map<std::string, double>;

/// 45 nm CMOS costs: 32-bit fixed/float add and multiply, 32 KB SRAM and
/// DRAM accesses.
const EnergyTable& default_energy_table();

/// Throws DomainError unless `table` has exactly the default rows with finite,
/// non-negative costs.
void validate_energy_table(const EnergyTable& table);

/// Sum of count * cost. Throws DomainError on names missing from the table.
double energy_estimate(const std::map<std::string, double>& op_counts,
                       const EnergyTable& table = default_energy_table());

/// Input bit width -> ops per cycle per SM.
using ThroughputTable = std::map<int, double>;

/// Turing tensor-core throughput for FP16 (keyed as 16), INT8, INT4, INT1.
const ThroughputTable& default_throughput_table();

/// Throughput of `bits` relative to the FP16 row.
double speedup_estimate(int bits, const ThroughputTable& table = default_throughput_table());

/// Halving bit widths from start_bits down to end_bits, both included.
std::vector<int> progressive_schedule(int start_bits, int end_bits);

}  // namespace abcnet
