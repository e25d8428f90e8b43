#pragma once

#include "ll/leakage.hpp"

#include <vector>

namespace ll::sca {

struct SnrProfile {
  VectorD values;        // one SNR per trace sample; +inf where noise vanishes
  int byte_position = 0;
  bool has_infinite = false;
};

// Variance of class-conditional means over mean of class-conditional
// variances, grouping on one logit byte. Classes with fewer than two traces
// are excluded from both terms.
SnrProfile compute_snr(const leaksim::TraceSet& ts, int byte_position);

struct PoiSelection {
  std::vector<int> indices;  // strictly increasing
  double threshold = 0.0;
};

class PoiError : public Error {
 public:
  PoiError(const std::string& what, double max_snr) : Error(what), max_snr(max_snr) {}
  double max_snr;
};

// All samples with SNR >= threshold; throws PoiError carrying the maximum
// observed SNR when nothing clears the threshold.
PoiSelection select_poi(const SnrProfile& snr, double threshold);

// Smallest threshold >= floor keeping at most max_points samples.
double threshold_for_budget(const SnrProfile& snr, double floor, int max_points);

VectorD reduce_trace(const Eigen::Ref<const VectorF>& trace, const PoiSelection& poi);

}  // namespace ll::sca
