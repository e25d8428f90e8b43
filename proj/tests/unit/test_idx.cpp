#include "ll/idx.hpp"

#include <doctest.h>

#include <cstdio>

using namespace ll;
using namespace ll::qnn;

namespace {

// Two 2x3 images, crafted byte by byte against the published layout.
std::vector<std::uint8_t> tiny_images_bytes() {
  std::vector<std::uint8_t> b = {0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 3};
  for (int i = 0; i < 12; ++i) b.push_back(static_cast<std::uint8_t>(i * 10));
  return b;
}

}  // namespace

TEST_CASE("image parsing follows the big-endian layout") {
  const auto img = parse_idx_images(tiny_images_bytes(), "tiny");
  CHECK(img.count == 2);
  CHECK(img.rows == 2);
  CHECK(img.cols == 3);
  CHECK(img.pixels[0] == 0);
  CHECK(img.pixels[11] == 110);
}

TEST_CASE("truncated payload reports expected vs actual length") {
  auto bytes = tiny_images_bytes();
  bytes.pop_back();
  try {
    parse_idx_images(bytes, "tiny");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("11") != std::string::npos);
    CHECK(msg.find("12") != std::string::npos);
  }
}

TEST_CASE("wrong magic is rejected") {
  auto bytes = tiny_images_bytes();
  bytes[3] = 1;  // label magic in an image parser
  CHECK_THROWS_AS(parse_idx_images(bytes, "tiny"), DataError);
}

TEST_CASE("labels round-trip through files") {
  IdxLabels labels;
  labels.labels = {3, 1, 4, 1, 5};
  const std::string path = "idx_test_labels.idx1";
  write_idx_labels(path, labels);
  const auto back = read_idx_labels(path);
  CHECK(back.labels == labels.labels);
  std::remove(path.c_str());
}

TEST_CASE("images round-trip through files") {
  IdxImages img;
  img.count = 2;
  img.rows = 2;
  img.cols = 2;
  img.pixels = {1, 2, 3, 4, 250, 251, 252, 253};
  const std::string path = "idx_test_images.idx3";
  write_idx_images(path, img);
  const auto back = read_idx_images(path);
  CHECK(back.count == 2);
  CHECK(back.pixels == img.pixels);
  std::remove(path.c_str());
}
