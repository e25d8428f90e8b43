#pragma once

#include "ll/common.hpp"
#include "ll/model.hpp"

#include <vector>

namespace ll::qnn {

// Masked softmax of the embedded implementation: logits below max-8 get
// probability zero, the rest are normalized with exp(z - max).
VectorD nnom_softmax(const LogitVector& z);

inline constexpr int kSoftmaxMaskSpan = 8;

enum class EventKind { load_logit, load_base, store_base };

struct ScheduleEvent {
  EventKind kind;
  std::uint8_t value;  // byte on the bus
  int logit_index;

  bool operator==(const ScheduleEvent&) const = default;
};

// Byte carried by the base load before the first comparison. The loop's real
// register starts below the int8 range so index 0 always stores; -128 is the
// nearest representable byte for that initial load.
inline constexpr std::uint8_t kBaseInitByte = 0x80;

// Instruction stream of the max-search loop: per index one logit load, one
// base load (running maximum before comparison), and a store iff the logit
// strictly beats the running maximum (index 0 always stores).
std::vector<ScheduleEvent> argmax_search_schedule(const LogitVector& z);

}  // namespace ll::qnn
