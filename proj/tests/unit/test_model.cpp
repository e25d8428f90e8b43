#include "ll/model.hpp"

#include "oracles/scalar_reference.hpp"

#include <doctest.h>

using namespace ll;
using namespace ll::qnn;

namespace {

QuantizedTensor qt(std::vector<int> shape, std::vector<int> raw, int frac) {
  Vector<std::int8_t> data(static_cast<int>(raw.size()));
  for (std::size_t i = 0; i < raw.size(); ++i) {
    data[static_cast<int>(i)] = static_cast<std::int8_t>(raw[i]);
  }
  return QuantizedTensor(std::move(shape), std::move(data), frac);
}

}  // namespace

TEST_CASE("all-zero weights and biases give all-zero logits") {
  QuantizedModel m;
  m.input_frac_bits = 7;
  m.layers.push_back({qt({4, 3}, std::vector<int>(12, 0), 5), qt({4}, {0, 0, 0, 0}, 5), false, 4});
  const auto z = forward(m, qt({3}, {10, -20, 30}, 7));
  for (int i = 0; i < 4; ++i) CHECK(z[i] == 0);
}

TEST_CASE("scaled identity layer requantizes the input") {
  // weight = I * 2^5 at frac 5, output frac 4 -> out = round(v / 8)
  QuantizedModel m;
  m.input_frac_bits = 7;
  std::vector<int> w(9, 0);
  w[0] = w[4] = w[8] = 32;
  m.layers.push_back({qt({3, 3}, w, 5), qt({3}, {0, 0, 0}, 5), false, 4});
  const auto z = forward(m, qt({3}, {64, -100, 9}, 7));
  CHECK(z[0] == 8);
  CHECK(z[1] == -13);  // -100/8 = -12.5, half away from zero
  CHECK(z[2] == 1);
}

TEST_CASE("two-layer toy model matches the independent integer oracle bit-exactly") {
  QuantizedModel m;
  m.input_frac_bits = 7;
  const std::vector<int> w0 = {12, -34, 56, -78, 9, 87, -65, 43, -21, 5, 3, -7};
  const std::vector<int> b0 = {4, -5, 6};
  const std::vector<int> w1 = {90, -12, 33, -44, 55, -66};
  const std::vector<int> b1 = {-2, 7};
  m.layers.push_back({qt({3, 4}, w0, 6), qt({3}, b0, 5), true, 5});
  m.layers.push_back({qt({2, 3}, w1, 4), qt({2}, b1, 3), false, 4});

  std::vector<oracles::RefLayer> ref(2);
  ref[0] = {{{12, -34, 56, -78}, {9, 87, -65, 43}, {-21, 5, 3, -7}}, b0, 6, 5, 5, true};
  ref[1] = {{{90, -12, 33}, {-44, 55, -66}}, b1, 4, 3, 4, false};

  const std::vector<int> input = {100, -50, 25, -125};
  const auto z = forward(m, qt({4}, input, 7));
  const auto expect = oracles::ref_forward(ref, input, 7);
  REQUIRE(z.size() == 2);
  for (int i = 0; i < 2; ++i) CHECK(int(z[i]) == expect[i]);

  // determinism: identical input yields identical logits
  const auto z2 = forward(m, qt({4}, input, 7));
  CHECK(z == z2);
}

TEST_CASE("shape mismatch is rejected with a descriptive error") {
  QuantizedModel m;
  m.input_frac_bits = 7;
  m.layers.push_back({qt({2, 3}, std::vector<int>(6, 1), 5), qt({2}, {0, 0}, 5), false, 4});
  try {
    forward(m, qt({2}, {1, 2}, 7));
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("does not match") != std::string::npos);
  }
}

TEST_CASE("native input map makes one int8 step one native unit") {
  VectorD nat(3);
  nat << 0.0, 128.0, 255.0;
  const auto q = quantize_input_native(nat);
  CHECK(q.frac_bits == 7);
  CHECK(q.data[0] == -128);
  CHECK(q.data[1] == 0);
  CHECK(q.data[2] == 127);

  VectorD nudged(3);
  nudged << 1.0, 129.0, 254.0;
  const auto q2 = quantize_input_native(nudged);
  CHECK(q2.data[0] == -127);
  CHECK(q2.data[1] == 1);
  CHECK(q2.data[2] == 126);
}
