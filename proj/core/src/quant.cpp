// SPDX-License-Identifier: Apache-2.0
#include "abcnet/quant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "abcnet/error.hpp"

namespace abcnet {
namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

template <typename Fn>
QuantResult quantize_tensor(const Tensor& x, const QuantSpec& spec, Fn&& fn) {
  spec.validate();
  QuantResult out{Tensor(x.shape()), IndexTensor(x.shape())};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const QuantValue v = fn(x[i], spec);
    out.q[i] = v.q;
    out.z[i] = v.z;
  }
  return out;
}

}  // namespace

void QuantSpec::validate() const {
  if (bits < 1 || bits > 31) {
    throw DomainError("QuantSpec: bits = " + std::to_string(bits) + " outside [1, 31]");
  }
  if (!(std::isfinite(alpha_a) && alpha_a > 0.0) || !(std::isfinite(alpha_w) && alpha_w > 0.0)) {
    throw DomainError("QuantSpec: clip values must be positive and finite");
  }
}

QuantValue quant_act_value(double x, const QuantSpec& spec) {
  spec.validate();
  if (!std::isfinite(x)) throw DomainError("quant_act: non-finite input");
  const double top = static_cast<double>(spec.levels() - 1);
  const double alpha = spec.alpha_a;
  const double clipped = std::min(std::max(x, 0.0), alpha);
  const auto z = static_cast<std::int64_t>(std::round(clipped / alpha * top));
  return {static_cast<double>(z) * alpha / top, z};
}

QuantResult quant_act(const Tensor& x, const QuantSpec& spec) {
  return quantize_tensor(x, spec, quant_act_value);
}

QuantValue quant_weight_value(double x, const QuantSpec& spec) {
  spec.validate();
  if (!std::isfinite(x)) throw DomainError("quant_weight: non-finite input");
  const double top = static_cast<double>(spec.levels() - 1);
  const double alpha = spec.alpha_w;
  const double unit = std::min(std::max(x / alpha, -1.0), 1.0);
  const auto z = static_cast<std::int64_t>(std::round((unit + 1.0) / 2.0 * top));
  return {static_cast<double>(2 * z - (spec.levels() - 1)) * alpha / top, z};
}

QuantResult quant_weight(const Tensor& x, const QuantSpec& spec) {
  return quantize_tensor(x, spec, quant_weight_value);
}

double ste_grad_act(double x, const QuantSpec& spec) {
  spec.validate();
  return (x >= 0.0 && x <= spec.alpha_a) ? 1.0 : 0.0;
}

double ste_grad_weight(double x, const QuantSpec& spec) {
  spec.validate();
  return (x >= -spec.alpha_w && x <= spec.alpha_w) ? 1.0 : 0.0;
}

IntMatmulCheck int_matmul_check(const Tensor& activations, const Tensor& weights,
                                const QuantSpec& spec) {
  spec.validate();
  require_rank(activations, 2, "int_matmul_check");
  require_rank(weights, 2, "int_matmul_check");
  const std::size_t rows = activations.dim(0);
  const std::size_t inner = activations.dim(1);
  const std::size_t cols = weights.dim(1);
  if (weights.dim(0) != inner) {
    throw DimensionError("int_matmul_check: inner dimensions differ (" +
                         shape_to_string(activations.shape()) + " x " +
                         shape_to_string(weights.shape()) + ")");
  }

  const std::int64_t top = spec.levels() - 1;
  // |Za| <= top and |2 Zw - top| <= top, so every partial sum is bounded by
  // top^2 * K.
  const long double bound = static_cast<long double>(top) * static_cast<long double>(top) *
                            static_cast<long double>(inner);
  if (bound > static_cast<long double>(std::numeric_limits<std::int64_t>::max())) {
    throw OverflowError("int_matmul_check: accumulator bound (l-1)^2 * K exceeds int64");
  }

  const QuantResult qa = quant_act(activations, spec);
  const QuantResult qw = quant_weight(weights, spec);

  IntMatmulCheck out{matmul(qa.q, qw.q), Tensor({rows, cols}), 0.0};
  const double scale = spec.alpha_a * spec.alpha_w / (static_cast<double>(top) * top);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      std::int64_t acc = 0;
      for (std::size_t k = 0; k < inner; ++k) {
        acc += qa.z.at(i, k) * (2 * qw.z.at(k, j) - top);
      }
      out.int_path.at(i, j) = static_cast<double>(acc) * scale;
      out.max_abs_diff =
          std::max(out.max_abs_diff, std::abs(out.int_path.at(i, j) - out.float_path.at(i, j)));
    }
  }
  return out;
}

double quantization_error(std::span<const double> x, const QuantSpec& spec, bool weights) {
  spec.validate();
  double sum = 0.0;
  for (double v : x) {
    const double q = weights ? quant_weight_value(v, spec).q : quant_act_value(v, spec).q;
    sum += (q - v) * (q - v);
  }
  return sum;
}

double search_alpha(std::span<const double> x, int bits, std::span<const double> candidates,
                    bool weights) {
  if (candidates.empty()) throw DomainError("search_alpha: no candidates");
  double best_alpha = 0.0;
  double best_error = std::numeric_limits<double>::infinity();
  for (double alpha : candidates) {
    const QuantSpec spec{bits, alpha, alpha};
    const double err = quantization_error(x, spec, weights);
    if (err < best_error) {
      best_error = err;
      best_alpha = alpha;
    }
  }
  return best_alpha;
}

double memory_saving(int bits) {
  if (bits < 1 || bits > 32) {
    throw DomainError("memory_saving: bits = " + std::to_string(bits) + " outside [1, 32]");
  }
  return 32.0 / bits;
}

const EnergyTable& default_energy_table() {
  static const EnergyTable table{
      {"fixed_add_32", 0.1},  {"float_add_32", 0.9},     {"fixed_mult_32", 3.1},
      {"float_mult_32", 3.7}, {"sram_32kb_read_32", 5.0}, {"dram_read_32", 640.0},
  };
  return table;
}

void validate_energy_table(const EnergyTable& table) {
  const EnergyTable& reference = default_energy_table();
  if (table.size() != reference.size()) {
    throw DomainError("energy table: expected exactly " + std::to_string(reference.size()) +
                      " operations");
  }
  for (const auto& [name, cost] : table) {
    if (!reference.contains(name)) throw DomainError("energy table: unknown operation " + name);
    if (!(std::isfinite(cost) && cost >= 0.0)) {
      throw DomainError("energy table: invalid cost for " + name);
    }
  }
}

double energy_estimate(const std::map<std::string, double>& op_counts, const EnergyTable& table) {
  double total = 0.0;
  for (const auto& [name, count] : op_counts) {
    const auto it = table.find(name);
    if (it == table.end()) throw DomainError("energy_estimate: unknown operation " + name);
    total += count * it->second;
  }
  return total;
}

const ThroughputTable& default_throughput_table() {
  static const ThroughputTable table{{16, 1024.0}, {8, 2048.0}, {4, 4096.0}, {1, 16384.0}};
  return table;
}

double speedup_estimate(int bits, const ThroughputTable& table) {
  const auto baseline = table.find(16);
  const auto row = table.find(bits);
  if (baseline == table.end() || row == table.end()) {
    throw DomainError("speedup_estimate: no throughput entry for " + std::to_string(bits) +
                      " bits");
  }
  return row->second / baseline->second;
}

std::vector<int> progressive_schedule(int start_bits, int end_bits) {
  if (!is_power_of_two(start_bits) || !is_power_of_two(end_bits) || start_bits < end_bits) {
    throw DomainError("progressive_schedule: need powers of two with start >= end >= 1");
  }
  std::vector<int> schedule;
  for (int b = start_bits; b >= end_bits; b /= 2) schedule.push_back(b);
  return schedule;
}

}  // namespace abcnet
