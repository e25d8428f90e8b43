#pragma once

#include "ll/common.hpp"
#include "ll/mlp.hpp"
#include "ll/tensor.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ll::qnn {

// Signed 8-bit confidence scores; raw bytes over 127 encode negative logits.
struct LogitVector {
  std::vector<std::int8_t> values;

  LogitVector() = default;
  explicit LogitVector(std::vector<std::int8_t> v) : values(std::move(v)) {}

  int size() const { return static_cast<int>(values.size()); }
  std::int8_t operator[](int i) const { return values[i]; }
  std::uint8_t byte(int i) const { return to_byte(values[i]); }

  int argmax() const {  // lowest-index tie-break
    int best = 0;
    for (int i = 1; i < size(); ++i) {
      if (values[i] > values[best]) best = i;
    }
    return best;
  }

  bool operator==(const LogitVector& o) const { return values == o.values; }
};

struct QuantizedLayer {
  QuantizedTensor weight;  // shape [out, in], row-major
  QuantizedTensor bias;    // shape [out]
  bool relu = false;
  int output_frac_bits = 0;
};

struct QuantizedModel {
  std::vector<QuantizedLayer> layers;
  int input_frac_bits = 7;

  int num_classes() const { return layers.back().weight.shape[0]; }
  int input_dim() const { return layers.front().weight.shape[1]; }
  std::uint64_t content_hash() const;
};

// Integer inference. Accumulates int32, adds the shift-aligned bias, then
// requantizes to the layer's output scale (round half away from zero).
LogitVector forward(const QuantizedModel& model, const QuantizedTensor& input);

// Device-side input mapping: native [0,255] pixels are centered to [-1,1)
// and quantized at 7 fractional bits, so one int8 step is one native unit.
QuantizedTensor quantize_input_native(const VectorD& native);
VectorD normalize_input_native(const VectorD& native);  // float-model domain

int classify(const QuantizedModel& model, const VectorD& native);

// Float victim plus its quantized deployment.
struct TrainedVictim {
  QuantizedModel quantized;
  Mlp<double> shadow;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double quantized_test_accuracy = 0.0;
  std::uint64_t seed = 0;
};

// PTQ of a float net: per-tensor frac_bits for weights/biases, output scales
// calibrated from activation ranges on the calibration set (native pixels).
QuantizedModel quantize_model(const Mlp<double>& net, const RowMatrix<float>& calibration_native);

}  // namespace ll::qnn
