#include "ll/mlp.hpp"

#include <doctest.h>

using namespace ll;

namespace {

// Two separable blobs in 2-D.
void make_blobs(RowMatrix<double>& x, std::vector<int>& y, int n, std::uint64_t seed) {
  Rng rng(seed);
  x.resize(n, 2);
  y.resize(n);
  for (int i = 0; i < n; ++i) {
    const int cls = i % 2;
    x(i, 0) = (cls ? 2.0 : -2.0) + 0.3 * rng.next_gaussian();
    x(i, 1) = (cls ? -1.0 : 1.0) + 0.3 * rng.next_gaussian();
    y[i] = cls;
  }
}

}  // namespace

TEST_CASE("separable blobs are learned to high accuracy") {
  RowMatrix<double> x;
  std::vector<int> y;
  make_blobs(x, y, 400, 7);

  auto net = Mlp<double>::make(2, {8}, 2, 7);
  TrainOptions opts;
  opts.epochs = 30;
  opts.batch = 32;
  opts.learning_rate = 1e-2;
  opts.seed = 7;
  const TrainRecord rec = train_softmax_ce(net, x, y, opts);
  CHECK(rec.val_accuracy >= 0.99);
}

TEST_CASE("training is bit-deterministic given the seed") {
  RowMatrix<double> x;
  std::vector<int> y;
  make_blobs(x, y, 200, 3);

  auto run = [&]() {
    auto net = Mlp<double>::make(2, {6}, 2, 5);
    TrainOptions opts;
    opts.epochs = 5;
    opts.batch = 16;
    opts.learning_rate = 1e-2;
    opts.seed = 5;
    train_softmax_ce(net, x, y, opts);
    return net;
  };
  const auto a = run();
  const auto b = run();
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    CHECK(a.layers[l].weight == b.layers[l].weight);
    CHECK(a.layers[l].bias == b.layers[l].bias);
  }
}

TEST_CASE("input gradient matches finite differences") {
  auto net = Mlp<double>::make(3, {5, 4}, 2, 11);
  VectorD x(3);
  x << 0.3, -0.7, 0.2;
  VectorD dlogits(2);
  dlogits << 1.0, -0.5;

  const VectorD grad = net.input_gradient(x, dlogits);
  const double h = 1e-6;
  for (int i = 0; i < 3; ++i) {
    VectorD xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fp = dlogits.dot(net.logits(xp));
    const double fm = dlogits.dot(net.logits(xm));
    CHECK(grad[i] == doctest::Approx((fp - fm) / (2 * h)).epsilon(1e-4));
  }
}

TEST_CASE("degenerate inputs are rejected") {
  auto net = Mlp<double>::make(2, {}, 2, 1);
  RowMatrix<double> x(1, 2);
  x.setZero();
  std::vector<int> y{0};
  CHECK_THROWS_AS(train_softmax_ce(net, x, y, TrainOptions{}), DataError);
}
