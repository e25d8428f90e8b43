#pragma once

#include "ll/leakage.hpp"

#include <functional>

namespace ll::sca {

using Scorer = std::function<LogScores(const Eigen::Ref<const VectorF>&)>;

struct MapResult {
  int predicted = 0;
  LogScores accumulated;
};

int argmax_lowest(const LogScores& scores);

// MAP over a trace set: sum per-trace log scores, argmax with lowest-index
// tie-break.
MapResult map_accumulate(const leaksim::TraceSet& traces, const Scorer& scorer);

// Entry k = fraction of `repeats` independent attack draws recovering the
// true byte from the first k+1 traces. The factory gets a derived seed per
// repeat and must return at least max_traces traces.
VectorD success_rate_curve(const std::function<leaksim::TraceSet(std::uint64_t)>& attack_factory,
                           std::uint8_t true_byte, int max_traces, int repeats,
                           std::uint64_t seed, const Scorer& scorer);

}  // namespace ll::sca
