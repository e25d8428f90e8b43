#include "ll/distinguisher.hpp"

#include <doctest.h>

using namespace ll;
using namespace ll::sca;
using namespace ll::leaksim;

namespace {

// Linearly separable two-byte-class toy in 1-D.
TraceSet toy_set(int n, std::uint64_t seed) {
  TraceSet ts;
  ts.num_classes = 10;
  ts.samples.resize(n, 3);
  ts.labels.resize(n, 10);
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const int cls = i % 2;
    for (int k = 0; k < 10; ++k) ts.labels(i, k) = std::int8_t(cls);
    ts.samples(i, 0) = float(cls * 4.0 + 0.3 * rng.next_gaussian());
    ts.samples(i, 1) = float(0.1 * rng.next_gaussian());
    ts.samples(i, 2) = float(0.1 * rng.next_gaussian());
  }
  return ts;
}

PoiSelection poi_all(int n) {
  PoiSelection poi;
  poi.threshold = 0.0;
  for (int i = 0; i < n; ++i) poi.indices.push_back(i);
  return poi;
}

}  // namespace

TEST_CASE("paper-default hyperparameters are preserved") {
  CHECK(default_logreg_spec().hidden.empty());
  CHECK(default_logreg_hyper().learning_rate == doctest::Approx(1e-5));
  CHECK(default_logreg_hyper().epochs == 20);
  CHECK(default_logreg_hyper().batch == 512);
  CHECK(default_mlp_spec().hidden == std::vector<int>{1000, 1000, 100});
  CHECK(default_mlp_hyper().learning_rate == doctest::Approx(1e-4));
  CHECK(default_mlp_hyper().epochs == 20);
  CHECK(default_mlp_hyper().batch == 512);
}

TEST_CASE("separable toy reaches high accuracy after 20 epochs") {
  const TraceSet ts = toy_set(2000, 3);
  NeuralHyper hyper;
  hyper.epochs = 20;
  hyper.batch = 64;
  hyper.learning_rate = 1e-2;
  hyper.seed = 5;
  const NeuralDistinguisher d =
      train_distinguisher(ts, poi_all(3), 0, NeuralSpec{}, hyper);

  int correct = 0;
  const TraceSet fresh = toy_set(400, 4);
  for (int i = 0; i < fresh.count(); ++i) {
    const LogScores scores = neural_log_scores(fresh.samples.row(i).transpose(), d, poi_all(3));
    int best = 0;
    for (int c = 1; c < 256; ++c) {
      if (scores[c] > scores[best]) best = c;
    }
    if (best == to_byte(fresh.labels(i, 0))) ++correct;
  }
  CHECK(double(correct) / fresh.count() >= 0.99);
}

TEST_CASE("training twice with one seed is bit-identical") {
  const TraceSet ts = toy_set(300, 9);
  NeuralHyper hyper;
  hyper.epochs = 3;
  hyper.batch = 32;
  hyper.learning_rate = 1e-2;
  hyper.seed = 11;
  const auto a = train_distinguisher(ts, poi_all(3), 0, NeuralSpec{{16}}, hyper);
  const auto b = train_distinguisher(ts, poi_all(3), 0, NeuralSpec{{16}}, hyper);
  for (std::size_t l = 0; l < a.net.layers.size(); ++l) {
    CHECK(a.net.layers[l].weight == b.net.layers[l].weight);
    CHECK(a.net.layers[l].bias == b.net.layers[l].bias);
  }
}

TEST_CASE("zero-weight network scores uniformly") {
  const TraceSet ts = toy_set(100, 1);
  NeuralHyper hyper;
  hyper.epochs = 1;
  hyper.batch = 32;
  hyper.learning_rate = 1e-3;
  hyper.seed = 2;
  NeuralDistinguisher d = train_distinguisher(ts, poi_all(3), 0, NeuralSpec{}, hyper);
  d.net.layers[0].weight.setZero();
  d.net.layers[0].bias.setZero();
  const LogScores scores = neural_log_scores(ts.samples.row(0).transpose(), d, poi_all(3));
  for (int c = 0; c < 256; ++c) {
    CHECK(scores[c] == doctest::Approx(std::log(1.0 / 256.0)).epsilon(1e-6));
  }
}

TEST_CASE("scores exponentiate to a distribution") {
  const TraceSet ts = toy_set(300, 6);
  NeuralHyper hyper;
  hyper.epochs = 5;
  hyper.batch = 32;
  hyper.learning_rate = 1e-2;
  hyper.seed = 3;
  const NeuralDistinguisher d = train_distinguisher(ts, poi_all(3), 0, NeuralSpec{{8}}, hyper);
  const LogScores scores = neural_log_scores(ts.samples.row(5).transpose(), d, poi_all(3));
  double sum = 0.0;
  for (int c = 0; c < 256; ++c) sum += std::exp(scores[c]);
  // clamping can only remove mass below 256 * 1e-40
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
  for (int c = 0; c < 256; ++c) CHECK(scores[c] >= std::log(1e-40) - 1e-12);
}
