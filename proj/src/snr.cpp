#include "ll/snr.hpp"

#include <algorithm>
#include <limits>

namespace ll::sca {

SnrProfile compute_snr(const leaksim::TraceSet& ts, int byte_position) {
  if (!ts.labeled()) throw DataError("SNR needs a labeled trace set");
  if (byte_position < 0 || byte_position >= ts.num_classes) {
    throw DataError("byte position out of range");
  }
  const int len = ts.length();
  const int n = ts.count();

  std::vector<int> count(kByteClasses, 0);
  std::vector<VectorD> sum(kByteClasses), sumsq(kByteClasses);
  for (int i = 0; i < n; ++i) {
    const int cls = to_byte(ts.labels(i, byte_position));
    if (count[cls] == 0) {
      sum[cls] = VectorD::Zero(len);
      sumsq[cls] = VectorD::Zero(len);
    }
    VectorD row = ts.samples.row(i).cast<double>().transpose();
    sum[cls] += row;
    sumsq[cls] += row.cwiseProduct(row);
    ++count[cls];
  }

  // Contributing classes need >= 2 traces for a within-class variance.
  long total = 0;
  int classes = 0;
  for (int c = 0; c < kByteClasses; ++c) {
    if (count[c] >= 2) {
      total += count[c];
      ++classes;
    }
  }
  if (classes < 2) throw DataError("SNR needs at least two classes with two traces each");

  VectorD grand_mean = VectorD::Zero(len);
  for (int c = 0; c < kByteClasses; ++c) {
    if (count[c] >= 2) grand_mean += sum[c];
  }
  grand_mean /= double(total);

  VectorD between = VectorD::Zero(len);  // weighted variance of class means
  VectorD within = VectorD::Zero(len);   // weighted mean of class variances
  for (int c = 0; c < kByteClasses; ++c) {
    if (count[c] < 2) continue;
    const double w = double(count[c]) / double(total);
    VectorD mean = sum[c] / double(count[c]);
    VectorD dev = mean - grand_mean;
    between += w * dev.cwiseProduct(dev);
    VectorD var = (sumsq[c] - sum[c].cwiseProduct(mean)) / double(count[c] - 1);
    within += w * var.cwiseMax(0.0);
  }

  SnrProfile profile;
  profile.byte_position = byte_position;
  profile.values.resize(len);
  for (int t = 0; t < len; ++t) {
    if (within[t] <= 0.0) {
      profile.values[t] =
          between[t] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
      if (between[t] > 0.0) profile.has_infinite = true;
    } else {
      profile.values[t] = between[t] / within[t];
    }
  }
  return profile;
}

PoiSelection select_poi(const SnrProfile& snr, double threshold) {
  if (threshold <= 0.0) throw ConfigError("PoI threshold must be > 0");
  PoiSelection sel;
  sel.threshold = threshold;
  for (int t = 0; t < snr.values.size(); ++t) {
    if (snr.values[t] >= threshold) sel.indices.push_back(t);
  }
  if (sel.indices.empty()) {
    const double max_snr = snr.values.size() ? snr.values.maxCoeff() : 0.0;
    throw PoiError("no sample reaches SNR threshold " + std::to_string(threshold) +
                       " (max observed " + std::to_string(max_snr) + ")",
                   max_snr);
  }
  return sel;
}

double threshold_for_budget(const SnrProfile& snr, double floor, int max_points) {
  std::vector<double> v(snr.values.data(), snr.values.data() + snr.values.size());
  std::sort(v.begin(), v.end(), std::greater<double>());
  int kept = 0;
  for (double s : v) {
    if (s >= floor) ++kept;
  }
  if (max_points <= 0 || kept <= max_points) return floor;
  return std::max(floor, v[max_points - 1]);
}

VectorD reduce_trace(const Eigen::Ref<const VectorF>& trace, const PoiSelection& poi) {
  VectorD out(static_cast<int>(poi.indices.size()));
  for (std::size_t k = 0; k < poi.indices.size(); ++k) {
    out[static_cast<int>(k)] = trace[poi.indices[k]];
  }
  return out;
}

}  // namespace ll::sca
