#include "ll/softmax.hpp"

#include <cmath>
#include <optional>

namespace ll::qnn {

VectorD nnom_softmax(const LogitVector& z) {
  const int n = z.size();
  if (n == 0) throw DataError("empty logit vector");
  int m = z[0];
  for (int i = 1; i < n; ++i) m = std::max(m, int(z[i]));

  VectorD p = VectorD::Zero(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (int(z[i]) < m - kSoftmaxMaskSpan) continue;
    p[i] = std::exp(double(int(z[i]) - m));
    sum += p[i];
  }
  p /= sum;
  return p;
}

std::vector<ScheduleEvent> argmax_search_schedule(const LogitVector& z) {
  std::vector<ScheduleEvent> events;
  events.reserve(3 * z.size());
  std::optional<std::int8_t> running_max;
  for (int i = 0; i < z.size(); ++i) {
    events.push_back({EventKind::load_logit, z.byte(i), i});
    events.push_back(
        {EventKind::load_base, running_max ? to_byte(*running_max) : kBaseInitByte, i});
    if (!running_max || z[i] > *running_max) {
      running_max = z[i];
      events.push_back({EventKind::store_base, z.byte(i), i});
    }
  }
  return events;
}

}  // namespace ll::qnn
