#include "ll/train.hpp"

#include <doctest.h>

using namespace ll;
using namespace ll::qnn;

TEST_CASE("victim training reaches 0.90 on held-out digits and quantization keeps it") {
  const Dataset train = make_digits(1500, 9);
  const Dataset test = make_digits(400, derive_seed(9, 1));
  const TrainedVictim victim = train_victim(train, test, default_victim_arch(), 42);
  CHECK(victim.test_accuracy >= 0.90);
  CHECK(victim.quantized_test_accuracy >= 0.90);
}

TEST_CASE("same seed twice gives identical quantized weights") {
  const Dataset train = make_digits(400, 11);
  const Dataset test = make_digits(100, derive_seed(11, 1));
  VictimArch arch = default_victim_arch();
  arch.train.epochs = 10;
  const TrainedVictim a = train_victim(train, test, arch, 5);
  const TrainedVictim b = train_victim(train, test, arch, 5);
  CHECK(a.quantized.content_hash() == b.quantized.content_hash());
  CHECK(a.shadow.layers[0].weight == b.shadow.layers[0].weight);
}

TEST_CASE("linearly separable two-class set is learned nearly perfectly") {
  // class = bright left half vs bright right half
  Dataset ds;
  ds.rows = 8;
  ds.cols = 8;
  ds.images.resize(300, 64);
  ds.labels.resize(300);
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    const int cls = i % 2;
    ds.labels[i] = cls;
    for (int r = 0; r < 8; ++r) {
      for (int c = 0; c < 8; ++c) {
        const bool lit = cls == 0 ? c < 4 : c >= 4;
        double v = lit ? 220.0 : 30.0;
        v += 10.0 * rng.next_gaussian();
        ds.images(i, r * 8 + c) = float(std::clamp(v, 0.0, 255.0));
      }
    }
  }
  Dataset test = ds;
  VictimArch arch = default_victim_arch();
  arch.num_classes = 2;
  arch.train.epochs = 20;
  const TrainedVictim victim = train_victim(ds, test, arch, 1);
  CHECK(victim.test_accuracy >= 0.99);
}

TEST_CASE("labels outside the class range are rejected") {
  Dataset ds = make_digits(50, 1);
  ds.labels[10] = 17;
  const Dataset test = make_digits(20, 2);
  CHECK_THROWS_AS(train_victim(ds, test, default_victim_arch(), 1), DataError);
}
