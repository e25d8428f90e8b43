#include "ll/distinguisher.hpp"

#include <cmath>

namespace ll::sca {

NeuralSpec default_logreg_spec() { return NeuralSpec{}; }

NeuralHyper default_logreg_hyper() {
  NeuralHyper h;
  h.epochs = 20;
  h.batch = 512;
  h.learning_rate = 1e-5;
  return h;
}

NeuralSpec default_mlp_spec() { return NeuralSpec{{1000, 1000, 100}}; }

NeuralHyper default_mlp_hyper() {
  NeuralHyper h;
  h.epochs = 20;
  h.batch = 512;
  h.learning_rate = 1e-4;
  return h;
}

NeuralDistinguisher train_distinguisher(const leaksim::TraceSet& ts, const PoiSelection& poi,
                                        int byte_position, const NeuralSpec& spec,
                                        const NeuralHyper& hyper) {
  if (!ts.labeled()) throw DataError("distinguisher training needs labels");
  const int n = ts.count();
  const int d = static_cast<int>(poi.indices.size());

  RowMatrix<float> x(n, d);
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) x(i, k) = ts.samples(i, poi.indices[k]);
    y[i] = to_byte(ts.labels(i, byte_position));
  }

  NeuralDistinguisher dist;
  dist.byte_position = byte_position;
  dist.feature_mean = x.colwise().mean().transpose();
  VectorF var = VectorF::Zero(d);
  for (int i = 0; i < n; ++i) {
    VectorF dev = x.row(i).transpose() - dist.feature_mean;
    var += dev.cwiseProduct(dev);
  }
  var /= float(std::max(1, n - 1));
  dist.feature_scale = (var.array() + 1e-12f).sqrt().inverse().matrix();
  for (int i = 0; i < n; ++i) {
    x.row(i) = (x.row(i).transpose() - dist.feature_mean).cwiseProduct(dist.feature_scale)
                   .transpose();
  }

  dist.net = Mlp<float>::make(d, spec.hidden, kByteClasses, hyper.seed);
  TrainOptions opts;
  opts.epochs = hyper.epochs;
  opts.batch = hyper.batch;
  opts.learning_rate = hyper.learning_rate;
  opts.seed = hyper.seed;
  opts.val_fraction = 0.1;  // held-out slice watches for divergence
  dist.record = train_softmax_ce(dist.net, x, y, opts);
  return dist;
}

LogScores neural_log_scores(const Eigen::Ref<const VectorF>& trace,
                            const NeuralDistinguisher& d, const PoiSelection& poi) {
  const int dim = static_cast<int>(poi.indices.size());
  VectorF x(dim);
  for (int k = 0; k < dim; ++k) x[k] = trace[poi.indices[k]];
  x = (x - d.feature_mean).cwiseProduct(d.feature_scale);

  VectorF z = d.net.logits(x);
  const float m = z.maxCoeff();
  VectorD ez = (z.array() - m).cast<double>().exp();
  const double sum = ez.sum();

  LogScores scores(kByteClasses);
  const double floor_log = std::log(kScoreFloor);
  for (int c = 0; c < kByteClasses; ++c) {
    scores[c] = std::max(std::log(ez[c]) - std::log(sum), floor_log);
  }
  return scores;
}

}  // namespace ll::sca
