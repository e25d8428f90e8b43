#include "ll/softmax.hpp"

#include "ll/rng.hpp"
#include "oracles/scalar_reference.hpp"
#include "oracles/schedule_reference.hpp"

#include <doctest.h>

using namespace ll;
using namespace ll::qnn;

namespace {

LogitVector lv(std::vector<int> v) {
  std::vector<std::int8_t> b(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) b[i] = static_cast<std::int8_t>(v[i]);
  return LogitVector(std::move(b));
}

LogitVector random_lv(Rng& rng, int n = 10) {
  std::vector<std::int8_t> b(n);
  for (auto& x : b) x = from_byte(rng.next_byte());
  return LogitVector(std::move(b));
}

}  // namespace

TEST_CASE("equal logits give the uniform distribution") {
  const auto p = nnom_softmax(lv(std::vector<int>(10, 5)));
  for (int i = 0; i < 10; ++i) CHECK(p[i] == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("a dominant logit masks everything else") {
  std::vector<int> z(10, 0);
  z[0] = 100;
  const auto p = nnom_softmax(lv(z));
  CHECK(p[0] == doctest::Approx(1.0));
  for (int i = 1; i < 10; ++i) CHECK(p[i] == 0.0);
}

TEST_CASE("values at the mask boundary survive, matching the scalar oracle") {
  // max-8 = 2: logits 3 and 2 stay in the normalization
  std::vector<int> z = {10, 3, 2, -5, -5, -5, -5, -5, -5, -5};
  const auto p = nnom_softmax(lv(z));
  const auto ref = oracles::scalar_masked_softmax(z);
  for (int i = 0; i < 10; ++i) CHECK(p[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  CHECK(p[1] > 0.0);
  CHECK(p[2] > 0.0);
  CHECK(p[3] == 0.0);
}

TEST_CASE("softmax properties over random vectors") {
  Rng rng(1234);
  for (int it = 0; it < 2000; ++it) {
    const auto z = random_lv(rng);
    const auto p = nnom_softmax(z);
    CHECK(std::abs(p.sum() - 1.0) <= 1e-9);
    int m = z[0];
    for (int i = 1; i < 10; ++i) m = std::max(m, int(z[i]));
    for (int i = 0; i < 10; ++i) {
      CHECK((p[i] == 0.0) == (int(z[i]) < m - 8));
      CHECK(p[i] >= 0.0);
    }
  }
}

TEST_CASE("argmax is invariant under a constant shift") {
  Rng rng(99);
  for (int it = 0; it < 500; ++it) {
    const auto z = random_lv(rng);
    int lo = 127, hi = -128;
    for (int i = 0; i < z.size(); ++i) {
      lo = std::min(lo, int(z[i]));
      hi = std::max(hi, int(z[i]));
    }
    // valid shifts keep every entry in [-128,127]: c in [-128-lo, 127-hi]
    const int span = (127 - hi) + (128 + lo) + 1;
    const int shift = int(rng.next_below(std::uint64_t(span))) - (128 + lo);
    std::vector<std::int8_t> shifted(z.size());
    for (int i = 0; i < z.size(); ++i) shifted[i] = static_cast<std::int8_t>(int(z[i]) + shift);
    const LogitVector zs{std::move(shifted)};
    const auto p = nnom_softmax(z);
    const auto ps = nnom_softmax(zs);
    int a1 = 0, a2 = 0;
    for (int i = 0; i < 10; ++i) {
      if (p[i] > p[a1]) a1 = i;
      if (ps[i] > ps[a2]) a2 = i;
    }
    CHECK(a1 == a2);
    CHECK(a1 == z.argmax());
  }
}

TEST_CASE("schedule for all-zero logits") {
  const auto ev = argmax_search_schedule(lv(std::vector<int>(10, 0)));
  int loads = 0, bases = 0, stores = 0;
  for (const auto& e : ev) {
    if (e.kind == EventKind::load_logit) ++loads;
    if (e.kind == EventKind::load_base) ++bases;
    if (e.kind == EventKind::store_base) ++stores;
  }
  CHECK(loads == 10);
  CHECK(bases == 10);
  CHECK(stores == 1);  // strict comparison: only index 0 stores
  CHECK(ev[2].kind == EventKind::store_base);
  CHECK(ev[2].logit_index == 0);
}

TEST_CASE("strictly increasing logits store at every index") {
  const auto ev = argmax_search_schedule(lv({-9, -5, 0, 3, 7, 20, 40, 80, 100, 120}));
  int stores = 0;
  for (const auto& e : ev) {
    if (e.kind == EventKind::store_base) ++stores;
  }
  CHECK(stores == 10);
}

TEST_CASE("hand-traced schedule for [3,7,5,7]") {
  const auto ev = argmax_search_schedule(lv({3, 7, 5, 7}));
  std::vector<ScheduleEvent> expect = {
      {EventKind::load_logit, 3, 0}, {EventKind::load_base, kBaseInitByte, 0},
      {EventKind::store_base, 3, 0}, {EventKind::load_logit, 7, 1},
      {EventKind::load_base, 3, 1},  {EventKind::store_base, 7, 1},
      {EventKind::load_logit, 5, 2}, {EventKind::load_base, 7, 2},
      {EventKind::load_logit, 7, 3}, {EventKind::load_base, 7, 3},
  };
  CHECK(ev == expect);
}

TEST_CASE("schedule equals the straight-line listing loop on random vectors") {
  Rng rng(777);
  for (int it = 0; it < 2000; ++it) {
    const auto z = random_lv(rng);
    CHECK(argmax_search_schedule(z) == oracles::reference_schedule(z));
  }
  // worst case: everything at the bottom of the range still stores once
  const auto all_min = lv(std::vector<int>(10, -128));
  const auto ev = argmax_search_schedule(all_min);
  CHECK(ev == oracles::reference_schedule(all_min));
  int stores = 0;
  std::uint8_t last_store = 0;
  for (const auto& e : ev) {
    if (e.kind == EventKind::store_base) {
      ++stores;
      last_store = e.value;
    }
  }
  CHECK(stores == 1);
  CHECK(last_store == to_byte(std::int8_t(-128)));
}

TEST_CASE("final store operand equals the maximum") {
  Rng rng(31415);
  for (int it = 0; it < 500; ++it) {
    const auto z = random_lv(rng);
    const auto ev = argmax_search_schedule(z);
    int stores = 0;
    std::uint8_t last = 0;
    for (const auto& e : ev) {
      if (e.kind == EventKind::store_base) {
        ++stores;
        last = e.value;
      }
    }
    CHECK(stores >= 1);
    CHECK(stores <= z.size());
    int m = z[0];
    for (int i = 1; i < z.size(); ++i) m = std::max(m, int(z[i]));
    CHECK(from_byte(last) == m);
  }
}
