#include "ll/tensor.hpp"

#include <cmath>

namespace ll::qnn {

namespace {

void check_shape(const std::vector<int>& shape, int n) {
  if (shape.empty()) throw DataError("tensor shape must be non-empty");
  for (int d : shape) {
    if (d < 1) throw DataError("tensor dimensions must be >= 1");
  }
  if (shape_size(shape) != n) {
    throw DataError("tensor shape does not match data length");
  }
}

}  // namespace

int shape_size(const std::vector<int>& shape) {
  int n = 1;
  for (int d : shape) n *= d;
  return n;
}

Tensor::Tensor(std::vector<int> shape_, VectorF data_)
    : shape(std::move(shape_)), data(std::move(data_)) {
  check_shape(shape, static_cast<int>(data.size()));
}

QuantizedTensor::QuantizedTensor(std::vector<int> shape_, Vector<std::int8_t> data_,
                                 int frac_bits_)
    : shape(std::move(shape_)), data(std::move(data_)), frac_bits(frac_bits_) {
  check_shape(shape, static_cast<int>(data.size()));
  if (frac_bits < 0 || frac_bits > 7) throw DataError("frac_bits must be in [0,7]");
}

std::int8_t saturate_round(double x) {
  const double r = (x >= 0.0) ? std::floor(x + 0.5) : std::ceil(x - 0.5);
  if (r > 127.0) return 127;
  if (r < -128.0) return -128;
  return static_cast<std::int8_t>(r);
}

QuantizedTensor quantize_ptq(const Tensor& t, int frac_bits) {
  if (frac_bits < 0 || frac_bits > 7) throw DataError("frac_bits must be in [0,7]");
  const double s = static_cast<double>(1 << frac_bits);
  Vector<std::int8_t> q(t.data.size());
  for (int i = 0; i < t.data.size(); ++i) {
    q[i] = saturate_round(static_cast<double>(t.data[i]) * s);
  }
  return QuantizedTensor(t.shape, std::move(q), frac_bits);
}

Tensor dequantize(const QuantizedTensor& q) {
  const float s = static_cast<float>(q.scale());
  VectorF x(q.data.size());
  for (int i = 0; i < q.data.size(); ++i) {
    x[i] = static_cast<float>(q.data[i]) * s;
  }
  return Tensor(q.shape, std::move(x));
}

int pick_frac_bits(double max_abs) {
  if (max_abs <= 0.0) return 7;
  int f = 7;
  while (f > 0 && max_abs * static_cast<double>(1 << f) > 127.0) --f;
  return f;
}

}  // namespace ll::qnn
