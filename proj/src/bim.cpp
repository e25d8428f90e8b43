#include "ll/bim.hpp"

#include <algorithm>
#include <cmath>

namespace ll::advgen {

VectorD shadow_ce_input_gradient(const Mlp<double>& shadow, const VectorD& native,
                                 int true_class) {
  const VectorD normalized = qnn::normalize_input_native(native);
  VectorD z = shadow.logits(normalized);
  const double m = z.maxCoeff();
  VectorD p = (z.array() - m).exp();
  p /= p.sum();
  VectorD dlogits = p;  // d(CE)/d(logits) = softmax - onehot
  dlogits[true_class] -= 1.0;
  // d(normalized)/d(native) = 1/128
  return shadow.input_gradient(normalized, dlogits) / 128.0;
}

BimResult bim_whitebox_baseline(const Mlp<double>& shadow, const qnn::QuantizedModel& victim,
                                const VectorD& x0, int true_class, const BimSpec& spec) {
  BimResult res;
  VectorD x = x0;
  for (int iter = 0; iter < spec.iterations; ++iter) {
    const VectorD grad = shadow_ce_input_gradient(shadow, x, true_class);
    for (int i = 0; i < x.size(); ++i) {
      const double sign = grad[i] > 0.0 ? 1.0 : (grad[i] < 0.0 ? -1.0 : 0.0);
      double v = x[i] + spec.alpha * sign;
      v = std::clamp(v, x0[i] - spec.epsilon, x0[i] + spec.epsilon);
      x[i] = std::clamp(v, spec.box_lo, spec.box_hi);
    }
    res.iterations = iter + 1;
    if (shadow.argmax(qnn::normalize_input_native(x)) != true_class) break;
  }
  res.adversarial = x;
  res.distortion = distortion_l2(x0, x);
  res.fools_shadow = shadow.argmax(qnn::normalize_input_native(x)) != true_class;
  res.fools_victim = qnn::classify(victim, x) != true_class;
  return res;
}

}  // namespace ll::advgen
