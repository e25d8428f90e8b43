#pragma once

#include "ll/common.hpp"
#include "ll/rng.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace ll {

struct TrainRecord {
  int epochs = 0;
  int batch = 0;
  double learning_rate = 0.0;
  std::uint64_t seed = 0;
  double final_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainOptions {
  int epochs = 20;
  int batch = 512;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  double val_fraction = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
};

// Plain fully-connected net. Instantiated with double for the victim trainer
// and float for the trace distinguishers.
template <typename Scalar>
struct Mlp {
  struct Layer {
    Matrix<Scalar> weight;  // out x in
    Vector<Scalar> bias;
    bool relu = false;
  };

  std::vector<Layer> layers;

  int input_dim() const { return static_cast<int>(layers.front().weight.cols()); }
  int output_dim() const { return static_cast<int>(layers.back().weight.rows()); }

  static Mlp make(int input, const std::vector<int>& hidden, int output, std::uint64_t seed) {
    Mlp net;
    Rng rng(derive_seed(seed, 0x11));
    std::vector<int> dims;
    dims.push_back(input);
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(output);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
      Layer layer;
      layer.weight.resize(dims[l + 1], dims[l]);
      layer.bias = Vector<Scalar>::Zero(dims[l + 1]);
      const double std_dev = std::sqrt(2.0 / static_cast<double>(dims[l]));
      for (int r = 0; r < layer.weight.rows(); ++r) {
        for (int c = 0; c < layer.weight.cols(); ++c) {
          layer.weight(r, c) = static_cast<Scalar>(std_dev * rng.next_gaussian());
        }
      }
      layer.relu = (l + 2 < dims.size());
      net.layers.push_back(std::move(layer));
    }
    return net;
  }

  // Logits for a batch; one sample per row.
  Matrix<Scalar> logits(const Matrix<Scalar>& x) const {
    Matrix<Scalar> a = x;
    for (const Layer& layer : layers) {
      Matrix<Scalar> z = a * layer.weight.transpose();
      z.rowwise() += layer.bias.transpose();
      if (layer.relu) z = z.cwiseMax(Scalar(0));
      a = std::move(z);
    }
    return a;
  }

  Vector<Scalar> logits(const Vector<Scalar>& x) const {
    Matrix<Scalar> row = x.transpose();
    return logits(row).row(0).transpose();
  }

  // d(objective)/d(input) for objective = dlogits . logits(x).
  Vector<Scalar> input_gradient(const Vector<Scalar>& x, const Vector<Scalar>& dlogits) const {
    std::vector<Vector<Scalar>> acts;  // post-activation inputs of each layer
    acts.push_back(x);
    Vector<Scalar> a = x;
    std::vector<Vector<Scalar>> pre;  // pre-activation of each layer
    for (const Layer& layer : layers) {
      Vector<Scalar> z = layer.weight * a + layer.bias;
      pre.push_back(z);
      if (layer.relu) z = z.cwiseMax(Scalar(0));
      a = z;
      acts.push_back(a);
    }
    Vector<Scalar> grad = dlogits;
    for (int l = static_cast<int>(layers.size()) - 1; l >= 0; --l) {
      if (layers[l].relu) {
        for (int i = 0; i < grad.size(); ++i) {
          if (pre[l][i] <= Scalar(0)) grad[i] = Scalar(0);
        }
      }
      grad = layers[l].weight.transpose() * grad;
    }
    return grad;
  }

  int argmax(const Vector<Scalar>& x) const {
    Vector<Scalar> z = logits(x);
    int best = 0;
    for (int i = 1; i < z.size(); ++i) {
      if (z[i] > z[best]) best = i;
    }
    return best;
  }
};

namespace detail {

template <typename Scalar>
void softmax_rows(Matrix<Scalar>& z) {
  for (int r = 0; r < z.rows(); ++r) {
    const Scalar m = z.row(r).maxCoeff();
    z.row(r) = (z.row(r).array() - m).exp();
    z.row(r) /= z.row(r).sum();
  }
}

}  // namespace detail

// Softmax cross-entropy minimized with the Adam update rule. Deterministic
// given the seed. Throws on NaN loss with the failing (epoch, batch, lr).
template <typename Scalar>
TrainRecord train_softmax_ce(Mlp<Scalar>& net, const RowMatrix<Scalar>& x,
                             const std::vector<int>& y, const TrainOptions& opts) {
  const int n = static_cast<int>(x.rows());
  if (n < 2) throw DataError("training needs at least two samples");
  if (static_cast<int>(y.size()) != n) throw DataError("label count mismatch");

  const int n_val = std::max(0, static_cast<int>(opts.val_fraction * n));
  const int n_train = n - n_val;
  if (n_train < 1) throw DataError("empty training split");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng(derive_seed(opts.seed, 0x22));
  split_rng.shuffle(order.begin(), order.end());

  struct AdamSlot {
    Matrix<Scalar> mw, vw;
    Vector<Scalar> mb, vb;
  };
  std::vector<AdamSlot> adam(net.layers.size());
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    adam[l].mw = Matrix<Scalar>::Zero(net.layers[l].weight.rows(), net.layers[l].weight.cols());
    adam[l].vw = adam[l].mw;
    adam[l].mb = Vector<Scalar>::Zero(net.layers[l].bias.size());
    adam[l].vb = adam[l].mb;
  }

  Rng epoch_rng(derive_seed(opts.seed, 0x33));
  long step = 0;
  double last_loss = 0.0;
  const int batches = (n_train + opts.batch - 1) / opts.batch;

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    epoch_rng.shuffle(order.begin(), order.begin() + n_train);
    for (int b = 0; b < batches; ++b) {
      const int lo = b * opts.batch;
      const int hi = std::min(n_train, lo + opts.batch);
      const int bs = hi - lo;

      Matrix<Scalar> xb(bs, x.cols());
      std::vector<int> yb(bs);
      for (int i = 0; i < bs; ++i) {
        xb.row(i) = x.row(order[lo + i]);
        yb[i] = y[order[lo + i]];
      }

      // Forward, keeping activations for the backward pass.
      std::vector<Matrix<Scalar>> acts;
      acts.push_back(xb);
      std::vector<Matrix<Scalar>> pre;
      for (const auto& layer : net.layers) {
        Matrix<Scalar> z = acts.back() * layer.weight.transpose();
        z.rowwise() += layer.bias.transpose();
        pre.push_back(z);
        if (layer.relu) z = z.cwiseMax(Scalar(0));
        acts.push_back(std::move(z));
      }

      Matrix<Scalar> probs = pre.back();
      detail::softmax_rows(probs);
      double loss = 0.0;
      for (int i = 0; i < bs; ++i) {
        loss -= std::log(std::max(double(probs(i, yb[i])), 1e-40));
      }
      loss /= bs;
      last_loss = loss;
      if (!std::isfinite(loss)) {
        throw Error("NaN loss at lr=" + std::to_string(opts.learning_rate) + " epoch=" +
                    std::to_string(epoch) + " batch=" + std::to_string(b));
      }

      Matrix<Scalar> delta = probs;
      for (int i = 0; i < bs; ++i) delta(i, yb[i]) -= Scalar(1);
      delta /= Scalar(bs);

      ++step;
      const double bc1 = 1.0 - std::pow(opts.beta1, double(step));
      const double bc2 = 1.0 - std::pow(opts.beta2, double(step));

      for (int l = static_cast<int>(net.layers.size()) - 1; l >= 0; --l) {
        auto& layer = net.layers[l];
        Matrix<Scalar> gw = delta.transpose() * acts[l];
        Vector<Scalar> gb = delta.colwise().sum().transpose();
        if (l > 0) {
          Matrix<Scalar> next = delta * layer.weight;
          // gate through the previous layer's ReLU
          for (int r = 0; r < next.rows(); ++r) {
            for (int c = 0; c < next.cols(); ++c) {
              if (pre[l - 1](r, c) <= Scalar(0)) next(r, c) = Scalar(0);
            }
          }
          delta = std::move(next);
        }

        auto& slot = adam[l];
        slot.mw = Scalar(opts.beta1) * slot.mw + Scalar(1 - opts.beta1) * gw;
        slot.vw = Scalar(opts.beta2) * slot.vw + Scalar(1 - opts.beta2) * gw.cwiseProduct(gw);
        slot.mb = Scalar(opts.beta1) * slot.mb + Scalar(1 - opts.beta1) * gb;
        slot.vb = Scalar(opts.beta2) * slot.vb + Scalar(1 - opts.beta2) * gb.cwiseProduct(gb);
        const Scalar lr = Scalar(opts.learning_rate);
        layer.weight -= lr * (slot.mw / Scalar(bc1)).array()
                            .cwiseQuotient(((slot.vw / Scalar(bc2)).array().sqrt() +
                                            Scalar(opts.adam_eps)))
                            .matrix();
        layer.bias -= lr * (slot.mb / Scalar(bc1)).array()
                          .cwiseQuotient(((slot.vb / Scalar(bc2)).array().sqrt() +
                                          Scalar(opts.adam_eps)))
                          .matrix();
      }
    }
  }

  TrainRecord rec;
  rec.epochs = opts.epochs;
  rec.batch = opts.batch;
  rec.learning_rate = opts.learning_rate;
  rec.seed = opts.seed;
  rec.final_loss = last_loss;
  if (n_val > 0) {
    int correct = 0;
    for (int i = n_train; i < n; ++i) {
      Vector<Scalar> row = x.row(order[i]).transpose();
      if (net.argmax(row) == y[order[i]]) ++correct;
    }
    rec.val_accuracy = double(correct) / n_val;
  }
  return rec;
}

}  // namespace ll
