#pragma once

#include "ll/common.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ll::qnn {

// IDX containers as used by the MNIST distribution: 32-bit big-endian magic
// (0x00000803 for u8 image cubes, 0x00000801 for u8 label lists), big-endian
// dimension sizes, then the raw payload.
struct IdxImages {
  int count = 0;
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> pixels;  // count*rows*cols, row-major
};

struct IdxLabels {
  std::vector<std::uint8_t> labels;
};

IdxImages read_idx_images(const std::string& path);
IdxLabels read_idx_labels(const std::string& path);
void write_idx_images(const std::string& path, const IdxImages& images);
void write_idx_labels(const std::string& path, const IdxLabels& labels);

IdxImages parse_idx_images(const std::vector<std::uint8_t>& bytes, const std::string& origin);
IdxLabels parse_idx_labels(const std::vector<std::uint8_t>& bytes, const std::string& origin);

}  // namespace ll::qnn
