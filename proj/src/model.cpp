#include "ll/model.hpp"

#include "ll/rng.hpp"

#include <cmath>

namespace ll::qnn {

namespace {

// Round-half-away-from-zero shift; negative shift scales up.
std::int64_t shift_round(std::int64_t v, int shift) {
  if (shift <= 0) return v << (-shift);
  const std::int64_t half = std::int64_t(1) << (shift - 1);
  if (v >= 0) return (v + half) >> shift;
  return -((-v + half) >> shift);
}

std::int8_t saturate8(std::int64_t v) {
  if (v > 127) return 127;
  if (v < -128) return -128;
  return static_cast<std::int8_t>(v);
}

}  // namespace

std::uint64_t QuantizedModel::content_hash() const {
  std::uint64_t h = 0x243f6a8885a308d3ULL ^ static_cast<std::uint64_t>(input_frac_bits);
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    splitmix64(h);
  };
  for (const auto& layer : layers) {
    mix(static_cast<std::uint64_t>(layer.weight.frac_bits));
    mix(static_cast<std::uint64_t>(layer.bias.frac_bits));
    mix(static_cast<std::uint64_t>(layer.output_frac_bits));
    mix(layer.relu ? 1 : 0);
    for (int i = 0; i < layer.weight.size(); ++i) mix(to_byte(layer.weight.data[i]));
    for (int i = 0; i < layer.bias.size(); ++i) mix(to_byte(layer.bias.data[i]));
  }
  return h;
}

LogitVector forward(const QuantizedModel& model, const QuantizedTensor& input) {
  if (model.layers.empty()) throw DataError("model has no layers");
  if (input.size() != model.input_dim()) {
    throw DataError("input size " + std::to_string(input.size()) + " does not match layer 0 width " +
                    std::to_string(model.input_dim()));
  }
  if (input.frac_bits != model.input_frac_bits) {
    throw DataError("input frac_bits " + std::to_string(input.frac_bits) + " != model input scale " +
                    std::to_string(model.input_frac_bits));
  }

  Eigen::VectorXi act = input.data.cast<int>();
  int act_frac = input.frac_bits;
  for (const auto& layer : model.layers) {
    const int out = layer.weight.shape[0];
    const int in = layer.weight.shape[1];
    const int acc_frac = layer.weight.frac_bits + act_frac;
    const int bias_shift = acc_frac - layer.bias.frac_bits;
    const int out_shift = acc_frac - layer.output_frac_bits;
    if (bias_shift < 0) throw DataError("bias scale exceeds accumulator scale");

    Eigen::VectorXi next(out);
    for (int r = 0; r < out; ++r) {
      std::int64_t acc = 0;
      for (int c = 0; c < in; ++c) {
        acc += std::int64_t(layer.weight.data[r * in + c]) * std::int64_t(act[c]);
      }
      acc += std::int64_t(layer.bias.data[r]) << bias_shift;
      std::int8_t q = saturate8(shift_round(acc, out_shift));
      if (layer.relu && q < 0) q = 0;
      next[r] = q;
    }
    act = std::move(next);
    act_frac = layer.output_frac_bits;
  }

  std::vector<std::int8_t> out(act.size());
  for (int i = 0; i < act.size(); ++i) out[i] = static_cast<std::int8_t>(act[i]);
  return LogitVector(std::move(out));
}

QuantizedTensor quantize_input_native(const VectorD& native) {
  Vector<std::int8_t> q(native.size());
  for (int i = 0; i < native.size(); ++i) {
    q[i] = saturate_round(native[i] - 128.0);
  }
  return QuantizedTensor({static_cast<int>(native.size())}, std::move(q), 7);
}

VectorD normalize_input_native(const VectorD& native) {
  return (native.array() - 128.0) / 128.0;
}

int classify(const QuantizedModel& model, const VectorD& native) {
  return forward(model, quantize_input_native(native)).argmax();
}

QuantizedModel quantize_model(const Mlp<double>& net, const RowMatrix<float>& calibration_native) {
  QuantizedModel model;
  model.input_frac_bits = 7;

  // Track activation ranges layer by layer over the calibration set.
  const int n = static_cast<int>(calibration_native.rows());
  RowMatrix<double> act(n, calibration_native.cols());
  for (int i = 0; i < n; ++i) {
    VectorD nat = calibration_native.row(i).cast<double>().transpose();
    act.row(i) = normalize_input_native(nat).transpose();
  }

  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& fl = net.layers[l];

    QuantizedLayer ql;
    const double wmax = fl.weight.cwiseAbs().maxCoeff();
    const int wf = pick_frac_bits(wmax);
    {
      VectorF flat(fl.weight.size());
      int k = 0;
      for (int r = 0; r < fl.weight.rows(); ++r) {
        for (int c = 0; c < fl.weight.cols(); ++c) flat[k++] = static_cast<float>(fl.weight(r, c));
      }
      ql.weight = quantize_ptq(
          Tensor({static_cast<int>(fl.weight.rows()), static_cast<int>(fl.weight.cols())}, flat),
          wf);
    }

    // Float activations through this layer (calibration).
    RowMatrix<double> z = act * fl.weight.transpose();
    z.rowwise() += fl.bias.transpose();
    if (fl.relu) z = z.cwiseMax(0.0);

    const double amax = z.cwiseAbs().maxCoeff();
    ql.output_frac_bits = pick_frac_bits(amax);
    ql.relu = fl.relu;

    const int in_frac = (l == 0) ? model.input_frac_bits : model.layers.back().output_frac_bits;
    const int acc_frac = wf + in_frac;
    const double bmax = fl.bias.size() > 0 ? fl.bias.cwiseAbs().maxCoeff() : 0.0;
    const int bf = std::min(pick_frac_bits(bmax), acc_frac);
    {
      VectorF flat(fl.bias.size());
      for (int i = 0; i < fl.bias.size(); ++i) flat[i] = static_cast<float>(fl.bias[i]);
      ql.bias = quantize_ptq(Tensor({static_cast<int>(fl.bias.size())}, flat), bf);
    }

    model.layers.push_back(std::move(ql));
    act = std::move(z);
  }
  return model;
}

}  // namespace ll::qnn
