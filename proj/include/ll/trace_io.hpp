#pragma once

#include "ll/leakage.hpp"

#include <string>
#include <vector>

namespace ll::leaksim {

// LLTS trace-set container, little-endian:
//   "LLTS" | version u16 | trace_count u32 | trace_length u32 |
//   labeled u8 | num_classes u8 | per trace: trace_length f32 samples,
//   then num_classes raw label bytes when labeled.
inline constexpr std::uint16_t kLltsVersion = 1;

std::vector<std::uint8_t> encode_llts(const TraceSet& ts);
TraceSet decode_llts(const std::vector<std::uint8_t>& bytes, const std::string& origin);

void write_llts(const std::string& path, const TraceSet& ts);
TraceSet read_llts(const std::string& path);

}  // namespace ll::leaksim
