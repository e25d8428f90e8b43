#pragma once

#include "ll/mlp.hpp"
#include "ll/model.hpp"
#include "ll/zoo.hpp"

namespace ll::advgen {

struct BimSpec {
  double epsilon = 24.0;  // max per-pixel change, native units
  double alpha = 2.0;     // step per iteration, native units
  int iterations = 40;
  double box_lo = 0.0;
  double box_hi = 255.0;
};

struct BimResult {
  bool fools_shadow = false;
  bool fools_victim = false;  // the transfer measurement
  VectorD adversarial;
  double distortion = 0.0;
  int iterations = 0;
};

// Iterative sign-of-gradient ascent of the cross-entropy loss on the float
// shadow weights; success is judged on the quantized victim.
BimResult bim_whitebox_baseline(const Mlp<double>& shadow, const qnn::QuantizedModel& victim,
                                const VectorD& x0, int true_class, const BimSpec& spec);

// d(cross-entropy)/d(native input) on the shadow model.
VectorD shadow_ce_input_gradient(const Mlp<double>& shadow, const VectorD& native,
                                 int true_class);

}  // namespace ll::advgen
