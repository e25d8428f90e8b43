#include "ll/trace_io.hpp"

#include <doctest.h>

#ifndef LL_TEST_DATA_DIR
#define LL_TEST_DATA_DIR "tests/data"
#endif

using namespace ll;
using namespace ll::leaksim;

namespace {

// The golden fixture spelled out byte by byte: version 1, two labeled traces
// of three samples, two classes.
std::vector<std::uint8_t> golden_bytes() {
  std::vector<std::uint8_t> b = {'L', 'L', 'T', 'S', 1, 0, 2, 0, 0, 0, 3, 0, 0, 0, 1, 2};
  auto f32 = [&b](std::uint32_t bits) {
    for (int i = 0; i < 4; ++i) b.push_back(std::uint8_t(bits >> (8 * i)));
  };
  f32(0x3F800000);  // 1.0
  f32(0xC0200000);  // -2.5
  f32(0x00000000);  // 0.0
  b.push_back(0x05);
  b.push_back(0x80);
  f32(0x40500000);  // 3.25
  f32(0x42C80000);  // 100.0
  f32(0xBF000000);  // -0.5
  b.push_back(0x7F);
  b.push_back(0xFF);
  return b;
}

}  // namespace

TEST_CASE("golden bytes decode to the expected traces") {
  const TraceSet ts = decode_llts(golden_bytes(), "golden");
  REQUIRE(ts.count() == 2);
  REQUIRE(ts.length() == 3);
  REQUIRE(ts.labeled());
  CHECK(ts.num_classes == 2);
  CHECK(ts.samples(0, 0) == 1.0f);
  CHECK(ts.samples(0, 1) == -2.5f);
  CHECK(ts.samples(1, 1) == 100.0f);
  CHECK(ts.labels(0, 0) == 5);
  CHECK(ts.labels(0, 1) == -128);
  CHECK(ts.labels(1, 0) == 127);
  CHECK(ts.labels(1, 1) == -1);
}

TEST_CASE("encoder reproduces the golden bytes exactly") {
  const TraceSet ts = decode_llts(golden_bytes(), "golden");
  CHECK(encode_llts(ts) == golden_bytes());
}

TEST_CASE("committed golden file matches the in-test bytes") {
  const TraceSet ts = read_llts(std::string(LL_TEST_DATA_DIR) + "/golden.llts");
  CHECK(encode_llts(ts) == golden_bytes());
}

TEST_CASE("newer versions are rejected with an explicit version error") {
  auto bytes = golden_bytes();
  bytes[4] = 2;  // bump version
  try {
    decode_llts(bytes, "golden");
    FAIL("expected VersionError");
  } catch (const VersionError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("version 2") != std::string::npos);
    CHECK(msg.find("1") != std::string::npos);
  }
}

TEST_CASE("truncation and trailing garbage are detected") {
  auto bytes = golden_bytes();
  bytes.pop_back();
  CHECK_THROWS_AS(decode_llts(bytes, "golden"), DataError);
  bytes = golden_bytes();
  bytes.push_back(0);
  CHECK_THROWS_AS(decode_llts(bytes, "golden"), DataError);
  bytes = golden_bytes();
  bytes[0] = 'X';
  CHECK_THROWS_AS(decode_llts(bytes, "golden"), DataError);
}

TEST_CASE("unlabeled round-trip preserves samples") {
  TraceSet ts;
  ts.num_classes = 10;
  ts.samples.resize(3, 5);
  for (int i = 0; i < 3; ++i) {
    for (int t = 0; t < 5; ++t) ts.samples(i, t) = float(i * 10 + t) * 0.25f;
  }
  const TraceSet back = decode_llts(encode_llts(ts), "mem");
  CHECK_FALSE(back.labeled());
  CHECK(back.samples == ts.samples);
}
