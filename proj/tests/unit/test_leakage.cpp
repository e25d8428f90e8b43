#include "ll/leakage.hpp"

#include "ll/train.hpp"

#include <doctest.h>

#include <set>

using namespace ll;
using namespace ll::qnn;
using namespace ll::leaksim;

namespace {

LogitVector lv(std::vector<int> v) {
  std::vector<std::int8_t> b(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) b[i] = static_cast<std::int8_t>(v[i]);
  return LogitVector(std::move(b));
}

LeakageConfig quiet_config() {
  LeakageConfig cfg;
  cfg.samples_per_event = 4;
  cfg.pad_samples = 2;
  cfg.noise_sigma = 0.0;
  cfg.leak_amplitude = 1.0;
  cfg.leak_model = LeakModel::hamming_weight;
  cfg.num_classes = 10;
  return cfg;
}

}  // namespace

TEST_CASE("geometry is fixed by the config") {
  const LeakageConfig cfg = quiet_config();
  CHECK(num_events(cfg) == 30);
  CHECK(trace_length(cfg) == 30 * 4 + 31 * 2);
  CHECK(event_window_start(cfg, 0) == 2);
  CHECK(event_window_start(cfg, 1) == 8);
}

TEST_CASE("noiseless Hamming-weight leak puts exact values in the load window") {
  const LeakageConfig cfg = quiet_config();
  Rng rng(1);
  std::vector<int> z(10, 0);
  z[3] = int(std::int8_t(0xFF));
  const Trace t = simulate_trace(lv(z), cfg, rng);

  // load_logit of index 0 carries HW(0) = 0
  const int w0 = event_window_start(cfg, 0);
  for (int s = 0; s < 4; ++s) CHECK(t.samples[w0 + s] == 0.0f);
  // load_logit of index 3 carries HW(0xFF) = 8
  const int w3 = event_window_start(cfg, 9);
  for (int s = 0; s < 4; ++s) CHECK(t.samples[w3 + s] == 8.0f);
}

TEST_CASE("signal locality: outside event windows everything is zero at sigma 0") {
  const LeakageConfig cfg = quiet_config();
  Rng rng(1);
  const Trace t = simulate_trace(lv({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}), cfg, rng);
  std::set<int> covered;
  for (int e = 0; e < num_events(cfg); ++e) {
    for (int s = 0; s < cfg.samples_per_event; ++s) covered.insert(event_window_start(cfg, e) + s);
  }
  for (int i = 0; i < t.samples.size(); ++i) {
    if (!covered.count(i)) CHECK(t.samples[i] == 0.0f);
  }
}

TEST_CASE("silent store windows hold pure noise") {
  const LeakageConfig cfg = quiet_config();
  Rng rng(1);
  // decreasing vector: stores only at index 0, all later store slots silent
  const Trace t = simulate_trace(lv({50, 40, 30, 20, 10, 0, -10, -20, -30, -40}), cfg, rng);
  for (int idx = 1; idx < 10; ++idx) {
    const int w = event_window_start(cfg, 3 * idx + 2);
    for (int s = 0; s < cfg.samples_per_event; ++s) CHECK(t.samples[w + s] == 0.0f);
  }
}

TEST_CASE("determinism: same (z, cfg, seed) gives the identical trace") {
  LeakageConfig cfg = quiet_config();
  cfg.noise_sigma = 1.5;
  Rng a(7), b(7);
  const Trace ta = simulate_trace(lv({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}), cfg, a);
  const Trace tb = simulate_trace(lv({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}), cfg, b);
  CHECK(ta.samples == tb.samples);
}

TEST_CASE("two vectors differing at one index differ only in that index's windows") {
  const LeakageConfig cfg = quiet_config();
  std::vector<int> za(10, 3), zb(10, 3);
  zb[4] = 9;  // becomes the running max from index 4 on
  Rng ra(5), rb(5);
  const Trace ta = simulate_trace(lv(za), cfg, ra);
  const Trace tb = simulate_trace(lv(zb), cfg, rb);

  std::set<int> allowed;  // load_logit 4, store 4, base loads after 4
  for (int s = 0; s < cfg.samples_per_event; ++s) {
    allowed.insert(event_window_start(cfg, 3 * 4) + s);
    allowed.insert(event_window_start(cfg, 3 * 4 + 2) + s);
    for (int j = 5; j < 10; ++j) allowed.insert(event_window_start(cfg, 3 * j + 1) + s);
  }
  for (int i = 0; i < ta.samples.size(); ++i) {
    if (ta.samples[i] != tb.samples[i]) CHECK(allowed.count(i) == 1);
  }
}

TEST_CASE("weighted_bits couplings are a device property, not an acquisition property") {
  LeakageConfig cfg = quiet_config();
  cfg.leak_model = LeakModel::weighted_bits;
  cfg.device_seed = 77;
  Rng a(1), b(2);  // different acquisition streams, sigma 0
  const Trace ta = simulate_trace(lv({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}), cfg, a);
  const Trace tb = simulate_trace(lv({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}), cfg, b);
  CHECK(ta.samples == tb.samples);

  LeakageConfig other = cfg;
  other.device_seed = 78;
  Rng c(1);
  const Trace tc = simulate_trace(lv({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}), other, c);
  CHECK(ta.samples != tc.samples);
  CHECK(config_fingerprint(cfg) != config_fingerprint(other));
}

TEST_CASE("uniform profiling labels pass a chi-squared uniformity test") {
  LeakageConfig cfg = quiet_config();
  cfg.samples_per_event = 1;
  cfg.pad_samples = 0;
  const int n = 10000;
  const TraceSet ts = capture_profiling_set(ProfilingSource::uniform, n, cfg, 2024);
  REQUIRE(ts.labeled());
  // chi-squared over 256 bins at alpha = 0.001: df = 255, critical ~ 330.5
  for (int pos = 0; pos < 10; ++pos) {
    std::vector<int> hist(256, 0);
    for (int i = 0; i < n; ++i) hist[to_byte(ts.labels(i, pos))]++;
    const double expect = double(n) / 256.0;
    double chi2 = 0.0;
    for (int b = 0; b < 256; ++b) {
      const double d = hist[b] - expect;
      chi2 += d * d / expect;
    }
    CHECK(chi2 < 330.5);
  }
}

TEST_CASE("model-driven profiling labels are visibly non-uniform") {
  const Dataset train = make_digits(600, 4);
  const Dataset test = make_digits(100, 5);
  VictimArch arch = default_victim_arch();
  arch.train.epochs = 15;
  const TrainedVictim victim = train_victim(train, test, arch, 3);

  LeakageConfig cfg = quiet_config();
  cfg.samples_per_event = 1;
  cfg.pad_samples = 0;
  const int n = 4000;
  const TraceSet ts = capture_profiling_set(ProfilingSource::model_driven, n, cfg, 99,
                                            &victim.quantized, &train);
  // trained networks push one logit up: the per-position byte histogram
  // concentrates far above the uniform expectation
  int max_count = 0;
  std::vector<int> hist(256, 0);
  for (int i = 0; i < n; ++i) hist[to_byte(ts.labels(i, 0))]++;
  for (int b = 0; b < 256; ++b) max_count = std::max(max_count, hist[b]);
  CHECK(max_count > 10 * n / 256);
}

TEST_CASE("single-trace capture works") {
  const TraceSet ts = capture_profiling_set(ProfilingSource::uniform, 1, quiet_config(), 1);
  CHECK(ts.count() == 1);
  CHECK(ts.labeled());
}

TEST_CASE("attack capture keeps the truth out of the trace set") {
  const Dataset train = make_digits(300, 8);
  VictimArch arch = default_victim_arch();
  arch.train.epochs = 8;
  const TrainedVictim victim = train_victim(train, make_digits(50, 9), arch, 2);

  LeakageConfig cfg = quiet_config();
  VectorD nat = train.images.row(0).cast<double>().transpose();
  const auto cap = capture_attack_set(victim.quantized, quantize_input_native(nat), 3, cfg, 5);
  CHECK_FALSE(cap.traces.labeled());
  CHECK(cap.traces.count() == 3);
  CHECK(cap.truth == forward(victim.quantized, quantize_input_native(nat)));

  // sigma = 0: identical traces
  CHECK(cap.traces.samples.row(0) == cap.traces.samples.row(1));

  // different seeds change noise realizations only
  LeakageConfig noisy = cfg;
  noisy.noise_sigma = 1.0;
  const auto c1 = capture_attack_set(victim.quantized, quantize_input_native(nat), 2, noisy, 5);
  const auto c2 = capture_attack_set(victim.quantized, quantize_input_native(nat), 2, noisy, 6);
  CHECK(c1.traces.samples != c2.traces.samples);
  CHECK(c1.truth == c2.truth);
}

TEST_CASE("empirical SNR decreases with noise sigma") {
  LeakageConfig cfg = quiet_config();
  cfg.num_classes = 2;
  const int n = 8000;
  double previous = std::numeric_limits<double>::infinity();
  for (double sigma : {0.5, 1.5, 4.5}) {
    cfg.noise_sigma = sigma;
    const TraceSet ts = capture_profiling_set(ProfilingSource::uniform, n, cfg, 31337);
    // empirical SNR at the first load window sample
    const int t0 = event_window_start(cfg, 0);
    std::vector<double> sum(256, 0.0), sumsq(256, 0.0);
    std::vector<int> cnt(256, 0);
    for (int i = 0; i < n; ++i) {
      const int cls = to_byte(ts.labels(i, 0));
      sum[cls] += ts.samples(i, t0);
      sumsq[cls] += double(ts.samples(i, t0)) * ts.samples(i, t0);
      cnt[cls]++;
    }
    double gm = 0.0;
    int tot = 0;
    for (int c = 0; c < 256; ++c) {
      gm += sum[c];
      tot += cnt[c];
    }
    gm /= tot;
    double between = 0.0, within = 0.0;
    for (int c = 0; c < 256; ++c) {
      if (cnt[c] < 2) continue;
      const double mean = sum[c] / cnt[c];
      between += cnt[c] * (mean - gm) * (mean - gm);
      within += sumsq[c] - cnt[c] * mean * mean;
    }
    const double snr = between / within;
    CHECK(snr < previous);
    previous = snr;
  }
}

TEST_CASE("invalid configs are rejected") {
  LeakageConfig cfg = quiet_config();
  cfg.samples_per_event = 0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = quiet_config();
  cfg.noise_sigma = -1;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
}
