#include "ll/leakage.hpp"

namespace ll::leaksim {

void validate(const LeakageConfig& cfg) {
  if (cfg.samples_per_event < 1) throw ConfigError("samples_per_event must be >= 1");
  if (cfg.pad_samples < 0) throw ConfigError("pad_samples must be >= 0");
  if (cfg.noise_sigma < 0.0) throw ConfigError("noise_sigma must be >= 0");
  if (cfg.num_classes < 1) throw ConfigError("num_classes must be >= 1");
}

int num_events(const LeakageConfig& cfg) { return 3 * cfg.num_classes; }

int trace_length(const LeakageConfig& cfg) {
  const int e = num_events(cfg);
  return e * cfg.samples_per_event + (e + 1) * cfg.pad_samples;
}

int event_window_start(const LeakageConfig& cfg, int event_slot) {
  return cfg.pad_samples + event_slot * (cfg.samples_per_event + cfg.pad_samples);
}

std::uint64_t config_fingerprint(const LeakageConfig& cfg) {
  std::uint64_t h = 0x13198a2e03707344ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    splitmix64(h);
  };
  mix(static_cast<std::uint64_t>(cfg.samples_per_event));
  mix(static_cast<std::uint64_t>(cfg.pad_samples));
  mix(static_cast<std::uint64_t>(cfg.num_classes));
  mix(static_cast<std::uint64_t>(cfg.leak_model));
  std::uint64_t bits = 0;
  static_assert(sizeof(double) == 8);
  std::memcpy(&bits, &cfg.noise_sigma, 8);
  mix(bits);
  std::memcpy(&bits, &cfg.leak_amplitude, 8);
  mix(bits);
  mix(cfg.device_seed);
  return h;
}

double leak_value(const LeakageConfig& cfg, std::uint8_t byte, int abs_sample) {
  switch (cfg.leak_model) {
    case LeakModel::hamming_weight:
      return static_cast<double>(hamming_weight(byte));
    case LeakModel::identity_byte:
      return static_cast<double>(byte) / 255.0;
    case LeakModel::weighted_bits: {
      const std::uint64_t w = derive_seed(cfg.device_seed, static_cast<std::uint64_t>(abs_sample));
      int s = 0;
      for (int j = 0; j < 8; ++j) {
        if (byte & (1u << j)) s += ((w >> j) & 1) ? 1 : -1;
      }
      return static_cast<double>(s);
    }
  }
  throw ConfigError("unknown leak model");
}

qnn::LogitVector TraceSet::label_at(int i) const {
  if (!labeled()) throw DataError("trace set carries no labels");
  std::vector<std::int8_t> v(num_classes);
  for (int k = 0; k < num_classes; ++k) v[k] = labels(i, k);
  return qnn::LogitVector(std::move(v));
}

Trace TraceSet::trace_at(int i) const {
  Trace t;
  t.samples = samples.row(i).transpose();
  if (labeled()) t.label = label_at(i);
  t.input_id = std::to_string(i);
  return t;
}

void simulate_row(const qnn::LogitVector& z, const LeakageConfig& cfg, Rng& rng, float* row) {
  const int len = trace_length(cfg);
  if (cfg.noise_sigma > 0.0) {
    for (int t = 0; t < len; ++t) {
      row[t] = static_cast<float>(cfg.noise_sigma * rng.next_gaussian());
    }
  } else {
    for (int t = 0; t < len; ++t) row[t] = 0.0f;
  }

  const auto events = qnn::argmax_search_schedule(z);
  for (const auto& ev : events) {
    int slot = 3 * ev.logit_index;
    if (ev.kind == qnn::EventKind::load_base) slot += 1;
    if (ev.kind == qnn::EventKind::store_base) slot += 2;
    const int start = event_window_start(cfg, slot);
    for (int s = 0; s < cfg.samples_per_event; ++s) {
      row[start + s] +=
          static_cast<float>(cfg.leak_amplitude * leak_value(cfg, ev.value, start + s));
    }
  }
}

Trace simulate_trace(const qnn::LogitVector& z, const LeakageConfig& cfg, Rng& rng) {
  validate(cfg);
  if (z.size() != cfg.num_classes) throw DataError("logit count does not match config");
  Trace t;
  t.samples.resize(trace_length(cfg));
  simulate_row(z, cfg, rng, t.samples.data());
  return t;
}

namespace {

TraceSet make_empty_set(int n, const LeakageConfig& cfg, bool labeled, std::uint64_t seed) {
  TraceSet ts;
  ts.fingerprint = config_fingerprint(cfg);
  ts.num_classes = cfg.num_classes;
  ts.creation_seed = seed;
  ts.samples.resize(n, trace_length(cfg));
  if (labeled) ts.labels.resize(n, cfg.num_classes);
  return ts;
}

}  // namespace

TraceSet capture_profiling_set(ProfilingSource source, int n, const LeakageConfig& cfg,
                               std::uint64_t seed, const qnn::QuantizedModel* model,
                               const qnn::Dataset* data) {
  validate(cfg);
  if (n < 1) throw ConfigError("profiling capture needs n >= 1");
  if (source == ProfilingSource::model_driven && (model == nullptr || data == nullptr)) {
    throw ConfigError("model-driven capture needs a model and a dataset");
  }

  TraceSet ts = make_empty_set(n, cfg, true, seed);
  if (model != nullptr) ts.victim_hash = model->content_hash();

  for (int i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    qnn::LogitVector z;
    if (source == ProfilingSource::uniform) {
      std::vector<std::int8_t> v(cfg.num_classes);
      for (auto& b : v) b = from_byte(rng.next_byte());
      z = qnn::LogitVector(std::move(v));
    } else {
      const int idx = static_cast<int>(rng.next_below(data->count()));
      VectorD nat = data->images.row(idx).cast<double>().transpose();
      z = qnn::forward(*model, qnn::quantize_input_native(nat));
    }
    for (int k = 0; k < cfg.num_classes; ++k) ts.labels(i, k) = z[k];
    simulate_row(z, cfg, rng, ts.samples.row(i).data());
  }
  return ts;
}

AttackCapture capture_attack_set(const qnn::QuantizedModel& device,
                                 const qnn::QuantizedTensor& input, int n,
                                 const LeakageConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  if (n < 1) throw ConfigError("attack capture needs n >= 1");

  AttackCapture cap;
  cap.truth = qnn::forward(device, input);
  cap.traces = make_empty_set(n, cfg, false, seed);
  cap.traces.victim_hash = device.content_hash();
  for (int i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    simulate_row(cap.truth, cfg, rng, cap.traces.samples.row(i).data());
  }
  return cap;
}

}  // namespace ll::leaksim
