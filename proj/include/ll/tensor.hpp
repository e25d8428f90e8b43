#pragma once

#include "ll/common.hpp"

#include <cstdint>
#include <vector>

namespace ll::qnn {

// Row-major dense tensor of 32-bit reals.
struct Tensor {
  std::vector<int> shape;
  VectorF data;

  Tensor() = default;
  Tensor(std::vector<int> shape_, VectorF data_);

  int size() const { return static_cast<int>(data.size()); }
};

// Fixed-point tensor: value = raw / 2^frac_bits, raw in [-128, 127].
struct QuantizedTensor {
  std::vector<int> shape;
  Vector<std::int8_t> data;
  int frac_bits = 0;

  QuantizedTensor() = default;
  QuantizedTensor(std::vector<int> shape_, Vector<std::int8_t> data_, int frac_bits_);

  int size() const { return static_cast<int>(data.size()); }
  double scale() const { return 1.0 / static_cast<double>(1 << frac_bits); }
};

int shape_size(const std::vector<int>& shape);

// Round half away from zero, saturate to int8.
std::int8_t saturate_round(double x);

QuantizedTensor quantize_ptq(const Tensor& t, int frac_bits);
Tensor dequantize(const QuantizedTensor& q);

// Largest frac_bits in [0,7] such that max|x| * 2^f stays in int8 range.
int pick_frac_bits(double max_abs);

}  // namespace ll::qnn
