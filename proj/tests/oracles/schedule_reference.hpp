#pragma once

// Straight-line reimplementation of the embedded max-search loop, kept
// independent of the production schedule generator: a 16-bit base register
// initialized to -257 and a strict greater-than update per element.

#include "ll/softmax.hpp"

#include <vector>

namespace oracles {

inline std::vector<ll::qnn::ScheduleEvent> reference_schedule(const ll::qnn::LogitVector& z) {
  std::vector<ll::qnn::ScheduleEvent> events;
  int base = -257;
  for (int i = 0; i < z.size(); ++i) {
    events.push_back({ll::qnn::EventKind::load_logit, z.byte(i), i});
    const std::uint8_t base_byte =
        base < -128 ? ll::qnn::kBaseInitByte : ll::to_byte(static_cast<std::int8_t>(base));
    events.push_back({ll::qnn::EventKind::load_base, base_byte, i});
    if (int(z[i]) > base) {
      base = z[i];
      events.push_back({ll::qnn::EventKind::store_base, z.byte(i), i});
    }
  }
  return events;
}

}  // namespace oracles
