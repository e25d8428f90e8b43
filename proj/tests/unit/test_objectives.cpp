#include "ll/objectives.hpp"

#include "ll/rng.hpp"
#include "ll/softmax.hpp"

#include <doctest.h>

using namespace ll;
using namespace ll::advgen;

namespace {

VectorD vec(std::initializer_list<double> v) {
  VectorD x(int(v.size()));
  int i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

}  // namespace

TEST_CASE("margin clamps at -kappa once the target dominates") {
  CHECK(cw_logit_objective(vec({10.0, 1.0}), 0, 0.0) == doctest::Approx(-0.0));
  CHECK(cw_logit_objective(vec({10.0, 1.0}), 0, 3.0) == doctest::Approx(-3.0));
  CHECK(cw_logit_objective(vec({10.0, 8.0}), 0, 5.0) == doctest::Approx(-2.0));
}

TEST_CASE("hand-evaluated margin") {
  CHECK(cw_logit_objective(vec({3.0, 5.0}), 0, 0.0) == doctest::Approx(2.0));
}

TEST_CASE("adding a constant to all logits changes nothing") {
  Rng rng(5);
  for (int it = 0; it < 200; ++it) {
    VectorD z(6);
    for (int i = 0; i < 6; ++i) z[i] = rng.next_gaussian() * 5;
    const double c = rng.next_gaussian() * 10;
    const double a = cw_logit_objective(z, 2, 0.0);
    const double b = cw_logit_objective(VectorD(z.array() + c), 2, 0.0);
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
  }
}

TEST_CASE("uniform probabilities give zero at kappa zero") {
  CHECK(zoo_log_objective(vec({0.25, 0.25, 0.25, 0.25}), 1, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("two-class log objective matches the scalar value") {
  // kappa large enough that the clamp stays inactive
  CHECK(zoo_log_objective(vec({0.9, 0.1}), 0, 10.0) ==
        doctest::Approx(std::log(0.1) - std::log(0.9)).epsilon(1e-12));
  // at kappa = 0 the dominant target clamps to zero
  CHECK(zoo_log_objective(vec({0.9, 0.1}), 0, 0.0) == 0.0);
}

TEST_CASE("zero probabilities are clamped before the log") {
  const double v = zoo_log_objective(vec({1.0, 0.0}), 1, 0.0);
  CHECK(v == doctest::Approx(0.0 - std::log(1e-40)).epsilon(1e-9));
}

TEST_CASE("objective consistency with the logit margin when nothing is masked") {
  Rng rng(9);
  for (int it = 0; it < 300; ++it) {
    // span <= 8 keeps every entry unmasked
    std::vector<std::int8_t> zv(10);
    for (auto& b : zv) b = std::int8_t(int(rng.next_below(9)) - 4);
    const qnn::LogitVector z(zv);
    const VectorD probs = qnn::nnom_softmax(z);
    const int target = int(rng.next_below(10));
    CHECK(zoo_log_objective(probs, target, 0.0) ==
          doctest::Approx(cw_logit_objective(z, target, 0.0)).epsilon(1e-9));
  }
}

TEST_CASE("untargeted objective is the mirrored margin") {
  const VectorD probs = vec({0.7, 0.2, 0.1});
  CHECK(zoo_log_objective_untargeted(probs, 0, 0.0) ==
        doctest::Approx(std::log(0.7) - std::log(0.2)).epsilon(1e-12));
  // already misclassified: clamped at zero for kappa 0, negative otherwise
  CHECK(zoo_log_objective_untargeted(probs, 1, 0.0) == 0.0);
  CHECK(zoo_log_objective_untargeted(probs, 1, 10.0) < 0.0);
}

TEST_CASE("distortion is the plain Euclidean norm") {
  CHECK(distortion_l2(vec({1, 2, 3}), vec({1, 2, 3})) == 0.0);
  CHECK(distortion_l2(vec({0, 0, 0}), vec({0, 3, 0})) == doctest::Approx(3.0));
  CHECK_THROWS_AS(distortion_l2(vec({1, 2}), vec({1, 2, 3})), DataError);
}

TEST_CASE("class indices are validated") {
  CHECK_THROWS_AS(cw_logit_objective(vec({1, 2}), 5, 0.0), DataError);
  CHECK_THROWS_AS(zoo_log_objective(vec({0.5, 0.5}), -1, 0.0), DataError);
}
