#include "ll/trace_io.hpp"

#include <cstring>
#include <fstream>

namespace ll::leaksim {

namespace {

void push_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}

void push_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void push_f32(std::vector<std::uint8_t>& b, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  push_u32(b, bits);
}

struct Reader {
  const std::vector<std::uint8_t>& bytes;
  std::size_t off = 0;
  const std::string& origin;

  void need(std::size_t n) const {
    if (off + n > bytes.size()) {
      throw DataError(origin + ": truncated at byte offset " + std::to_string(off) +
                      " (need " + std::to_string(n) + " more)");
    }
  }
  std::uint8_t u8() {
    need(1);
    return bytes[off++];
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = std::uint16_t(bytes[off]) | (std::uint16_t(bytes[off + 1]) << 8);
    off += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(bytes[off + i]) << (8 * i);
    off += 4;
    return v;
  }
  float f32() {
    const std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
};

}  // namespace

std::vector<std::uint8_t> encode_llts(const TraceSet& ts) {
  std::vector<std::uint8_t> b;
  const std::size_t per_trace = 4u * ts.length() + (ts.labeled() ? ts.num_classes : 0);
  b.reserve(16 + per_trace * std::size_t(ts.count()));
  b.push_back('L');
  b.push_back('L');
  b.push_back('T');
  b.push_back('S');
  push_u16(b, kLltsVersion);
  push_u32(b, static_cast<std::uint32_t>(ts.count()));
  push_u32(b, static_cast<std::uint32_t>(ts.length()));
  b.push_back(ts.labeled() ? 1 : 0);
  b.push_back(static_cast<std::uint8_t>(ts.num_classes));
  for (int i = 0; i < ts.count(); ++i) {
    for (int t = 0; t < ts.length(); ++t) push_f32(b, ts.samples(i, t));
    if (ts.labeled()) {
      for (int k = 0; k < ts.num_classes; ++k) b.push_back(to_byte(ts.labels(i, k)));
    }
  }
  return b;
}

TraceSet decode_llts(const std::vector<std::uint8_t>& bytes, const std::string& origin) {
  Reader r{bytes, 0, origin};
  r.need(4);
  if (std::memcmp(bytes.data(), "LLTS", 4) != 0) throw DataError(origin + ": bad magic");
  r.off = 4;
  const std::uint16_t version = r.u16();
  if (version > kLltsVersion) {
    throw VersionError(origin + ": format version " + std::to_string(version) +
                       " is newer than supported version " + std::to_string(kLltsVersion));
  }
  const std::uint32_t count = r.u32();
  const std::uint32_t length = r.u32();
  const bool labeled = r.u8() != 0;
  const int num_classes = r.u8();

  TraceSet ts;
  ts.num_classes = num_classes;
  ts.samples.resize(count, length);
  if (labeled) ts.labels.resize(count, num_classes);
  for (std::uint32_t i = 0; i < count; ++i) {
    for (std::uint32_t t = 0; t < length; ++t) ts.samples(i, t) = r.f32();
    if (labeled) {
      for (int k = 0; k < num_classes; ++k) ts.labels(i, k) = from_byte(r.u8());
    }
  }
  if (r.off != bytes.size()) {
    throw DataError(origin + ": " + std::to_string(bytes.size() - r.off) +
                    " trailing bytes after payload");
  }
  return ts;
}

void write_llts(const std::string& path, const TraceSet& ts) {
  const auto bytes = encode_llts(ts);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

TraceSet read_llts(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_llts(bytes, path);
}

}  // namespace ll::leaksim
