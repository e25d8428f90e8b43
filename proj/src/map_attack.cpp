#include "ll/map_attack.hpp"

namespace ll::sca {

int argmax_lowest(const LogScores& scores) {
  int best = 0;
  for (int i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

MapResult map_accumulate(const leaksim::TraceSet& traces, const Scorer& scorer) {
  if (traces.count() < 1) throw DataError("MAP accumulation needs at least one trace");
  MapResult out;
  out.accumulated = LogScores::Zero(kByteClasses);
  for (int i = 0; i < traces.count(); ++i) {
    out.accumulated += scorer(traces.samples.row(i).transpose());
  }
  out.predicted = argmax_lowest(out.accumulated);
  return out;
}

VectorD success_rate_curve(const std::function<leaksim::TraceSet(std::uint64_t)>& attack_factory,
                           std::uint8_t true_byte, int max_traces, int repeats,
                           std::uint64_t seed, const Scorer& scorer) {
  if (repeats < 1) throw ConfigError("success rate needs repeats >= 1");
  VectorD curve = VectorD::Zero(max_traces);
  for (int r = 0; r < repeats; ++r) {
    const leaksim::TraceSet set = attack_factory(derive_seed(seed, r));
    if (set.count() < max_traces) throw DataError("attack factory returned too few traces");
    LogScores acc = LogScores::Zero(kByteClasses);
    for (int k = 0; k < max_traces; ++k) {
      acc += scorer(set.samples.row(k).transpose());
      if (argmax_lowest(acc) == int(true_byte)) curve[k] += 1.0;
    }
  }
  curve /= double(repeats);
  return curve;
}

}  // namespace ll::sca
