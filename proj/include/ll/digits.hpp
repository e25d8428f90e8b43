#pragma once

#include "ll/common.hpp"
#include "ll/idx.hpp"

#include <cstdint>
#include <vector>

namespace ll::qnn {

// In-memory labeled image set; pixels in the native [0,255] range.
struct Dataset {
  RowMatrix<float> images;  // one flattened image per row
  std::vector<int> labels;
  int rows = 0;
  int cols = 0;

  int count() const { return static_cast<int>(images.rows()); }
  int pixels() const { return rows * cols; }
};

// Deterministic 8x8 digit set: glyph templates with per-sample shift,
// intensity scaling and additive noise. Stands in for MNIST at desk scale.
Dataset make_digits(int count, std::uint64_t seed);

Dataset dataset_from_idx(const IdxImages& images, const IdxLabels& labels);
void dataset_to_idx(const Dataset& ds, IdxImages& images, IdxLabels& labels);

Dataset load_dataset(const std::string& images_path, const std::string& labels_path);
void save_dataset(const Dataset& ds, const std::string& images_path,
                  const std::string& labels_path);

}  // namespace ll::qnn
