#include "ll/digits.hpp"

#include "ll/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace ll::qnn {

namespace {

// 8x8 glyphs, one string per row, '#' = ink.
const std::array<std::array<const char*, 8>, 10> kGlyphs = {{
    {".####...", "##..##..", "##..##..", "##..##..", "##..##..", "##..##..", ".####...",
     "........"},
    {"..##....", ".###....", "..##....", "..##....", "..##....", "..##....", ".####...",
     "........"},
    {".####...", "##..##..", "...##...", "..##....", ".##.....", "##......", "######..",
     "........"},
    {".####...", "....##..", "..###...", "....##..", "....##..", "##..##..", ".####...",
     "........"},
    {"...##...", "..###...", ".#.##...", "#..##...", "######..", "...##...", "...##...",
     "........"},
    {"######..", "##......", "#####...", "....##..", "....##..", "##..##..", ".####...",
     "........"},
    {".####...", "##......", "#####...", "##..##..", "##..##..", "##..##..", ".####...",
     "........"},
    {"######..", "....##..", "...##...", "..##....", "..##....", ".##.....", ".##.....",
     "........"},
    {".####...", "##..##..", ".####...", "##..##..", "##..##..", "##..##..", ".####...",
     "........"},
    {".####...", "##..##..", "##..##..", ".#####..", "....##..", "...##...", ".###....",
     "........"},
}};

}  // namespace

Dataset make_digits(int count, std::uint64_t seed) {
  if (count < 1) throw DataError("digit count must be >= 1");
  Dataset ds;
  ds.rows = 8;
  ds.cols = 8;
  ds.images.resize(count, 64);
  ds.labels.resize(count);

  for (int i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const int digit = static_cast<int>(rng.next_below(10));
    const int dx = static_cast<int>(rng.next_below(3)) - 1;
    const int dy = static_cast<int>(rng.next_below(3)) - 1;
    const double intensity = rng.next_uniform(0.7, 1.0);
    ds.labels[i] = digit;
    for (int r = 0; r < 8; ++r) {
      for (int c = 0; c < 8; ++c) {
        const int sr = r - dy;
        const int sc = c - dx;
        double v = 0.0;
        if (sr >= 0 && sr < 8 && sc >= 0 && sc < 8 && kGlyphs[digit][sr][sc] == '#') {
          v = 255.0 * intensity;
        }
        v += 16.0 * rng.next_gaussian();
        ds.images(i, r * 8 + c) = static_cast<float>(std::clamp(v, 0.0, 255.0));
      }
    }
  }
  return ds;
}

Dataset dataset_from_idx(const IdxImages& images, const IdxLabels& labels) {
  if (static_cast<std::size_t>(images.count) != labels.labels.size()) {
    throw DataError("image/label counts differ: " + std::to_string(images.count) + " vs " +
                    std::to_string(labels.labels.size()));
  }
  Dataset ds;
  ds.rows = images.rows;
  ds.cols = images.cols;
  const int px = images.rows * images.cols;
  ds.images.resize(images.count, px);
  ds.labels.resize(images.count);
  for (int i = 0; i < images.count; ++i) {
    ds.labels[i] = labels.labels[i];
    for (int p = 0; p < px; ++p) {
      ds.images(i, p) = static_cast<float>(images.pixels[std::size_t(i) * px + p]);
    }
  }
  return ds;
}

void dataset_to_idx(const Dataset& ds, IdxImages& images, IdxLabels& labels) {
  images.count = ds.count();
  images.rows = ds.rows;
  images.cols = ds.cols;
  const int px = ds.pixels();
  images.pixels.resize(std::size_t(ds.count()) * px);
  labels.labels.resize(ds.count());
  for (int i = 0; i < ds.count(); ++i) {
    labels.labels[i] = static_cast<std::uint8_t>(ds.labels[i]);
    for (int p = 0; p < px; ++p) {
      const double v = std::clamp(std::round(double(ds.images(i, p))), 0.0, 255.0);
      images.pixels[std::size_t(i) * px + p] = static_cast<std::uint8_t>(v);
    }
  }
}

Dataset load_dataset(const std::string& images_path, const std::string& labels_path) {
  return dataset_from_idx(read_idx_images(images_path), read_idx_labels(labels_path));
}

void save_dataset(const Dataset& ds, const std::string& images_path,
                  const std::string& labels_path) {
  IdxImages im;
  IdxLabels la;
  dataset_to_idx(ds, im, la);
  write_idx_images(images_path, im);
  write_idx_labels(labels_path, la);
}

}  // namespace ll::qnn
