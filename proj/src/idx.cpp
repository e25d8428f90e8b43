#include "ll/idx.hpp"

#include <cstdio>
#include <fstream>

namespace ll::qnn {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& b, std::size_t off,
                        const std::string& origin) {
  if (off + 4 > b.size()) {
    throw DataError(origin + ": truncated header at byte offset " + std::to_string(off));
  }
  return (std::uint32_t(b[off]) << 24) | (std::uint32_t(b[off + 1]) << 16) |
         (std::uint32_t(b[off + 2]) << 8) | std::uint32_t(b[off + 3]);
}

void push_be32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  b.push_back(static_cast<std::uint8_t>(v >> 24));
  b.push_back(static_cast<std::uint8_t>(v >> 16));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
  b.push_back(static_cast<std::uint8_t>(v));
}

void check_payload(std::size_t have, std::size_t want, const std::string& origin) {
  if (have != want) {
    throw DataError(origin + ": payload is " + std::to_string(have) +
                    " bytes, expected " + std::to_string(want));
  }
}

}  // namespace

IdxImages parse_idx_images(const std::vector<std::uint8_t>& bytes, const std::string& origin) {
  const std::uint32_t magic = read_be32(bytes, 0, origin);
  if (magic != kImageMagic) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "0x%08x", magic);
    throw DataError(origin + ": bad image magic " + buf);
  }
  IdxImages out;
  out.count = static_cast<int>(read_be32(bytes, 4, origin));
  out.rows = static_cast<int>(read_be32(bytes, 8, origin));
  out.cols = static_cast<int>(read_be32(bytes, 12, origin));
  const std::size_t want =
      std::size_t(out.count) * std::size_t(out.rows) * std::size_t(out.cols);
  check_payload(bytes.size() - 16, want, origin);
  out.pixels.assign(bytes.begin() + 16, bytes.end());
  return out;
}

IdxLabels parse_idx_labels(const std::vector<std::uint8_t>& bytes, const std::string& origin) {
  const std::uint32_t magic = read_be32(bytes, 0, origin);
  if (magic != kLabelMagic) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "0x%08x", magic);
    throw DataError(origin + ": bad label magic " + buf);
  }
  const std::uint32_t count = read_be32(bytes, 4, origin);
  check_payload(bytes.size() - 8, count, origin);
  IdxLabels out;
  out.labels.assign(bytes.begin() + 8, bytes.end());
  return out;
}

IdxImages read_idx_images(const std::string& path) {
  return parse_idx_images(read_file(path), path);
}

IdxLabels read_idx_labels(const std::string& path) {
  return parse_idx_labels(read_file(path), path);
}

void write_idx_images(const std::string& path, const IdxImages& images) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(16 + images.pixels.size());
  push_be32(bytes, kImageMagic);
  push_be32(bytes, static_cast<std::uint32_t>(images.count));
  push_be32(bytes, static_cast<std::uint32_t>(images.rows));
  push_be32(bytes, static_cast<std::uint32_t>(images.cols));
  bytes.insert(bytes.end(), images.pixels.begin(), images.pixels.end());
  write_file(path, bytes);
}

void write_idx_labels(const std::string& path, const IdxLabels& labels) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(8 + labels.labels.size());
  push_be32(bytes, kLabelMagic);
  push_be32(bytes, static_cast<std::uint32_t>(labels.labels.size()));
  bytes.insert(bytes.end(), labels.labels.begin(), labels.labels.end());
  write_file(path, bytes);
}

}  // namespace ll::qnn
