#pragma once

#include "ll/common.hpp"
#include "ll/digits.hpp"
#include "ll/model.hpp"
#include "ll/rng.hpp"
#include "ll/softmax.hpp"

#include <optional>
#include <string>

namespace ll::leaksim {

// hamming_weight: L(b) = HW(b); identity_byte: L(b) = b/255;
// weighted_bits: L(b,t) = sum_j w[t,j]*bit_j(b) with fixed per-device +-1
// couplings, the bit-level structure real probes see.
enum class LeakModel { hamming_weight, identity_byte, weighted_bits };

struct LeakageConfig {
  int samples_per_event = 5;
  double noise_sigma = 1.0;
  LeakModel leak_model = LeakModel::hamming_weight;
  double leak_amplitude = 1.0;
  int pad_samples = 3;
  std::uint64_t rng_seed = 0;     // acquisition stream
  std::uint64_t device_seed = 0;  // fixes weighted_bits couplings
  int num_classes = 10;
};

void validate(const LeakageConfig& cfg);

// 3 events per logit index; the store slot is always allocated so trace
// length never depends on the data.
int num_events(const LeakageConfig& cfg);
int trace_length(const LeakageConfig& cfg);
int event_window_start(const LeakageConfig& cfg, int event_slot);

// Identifies compatible captures; covers geometry, leak model and device,
// not the acquisition seed.
std::uint64_t config_fingerprint(const LeakageConfig& cfg);

double leak_value(const LeakageConfig& cfg, std::uint8_t byte, int abs_sample);

struct Trace {
  VectorF samples;
  std::optional<qnn::LogitVector> label;
  std::string input_id;
};

struct TraceSet {
  std::uint64_t fingerprint = 0;
  TraceMatrix samples;  // n x trace_length
  LabelMatrix labels;   // n x num_classes when labeled, 0x0 otherwise
  int num_classes = 0;
  std::uint64_t creation_seed = 0;
  std::uint64_t victim_hash = 0;

  int count() const { return static_cast<int>(samples.rows()); }
  int length() const { return static_cast<int>(samples.cols()); }
  bool labeled() const { return labels.rows() > 0; }
  qnn::LogitVector label_at(int i) const;
  Trace trace_at(int i) const;
};

Trace simulate_trace(const qnn::LogitVector& z, const LeakageConfig& cfg, Rng& rng);
void simulate_row(const qnn::LogitVector& z, const LeakageConfig& cfg, Rng& rng, float* row);

enum class ProfilingSource { uniform, model_driven };

// Labeled captures for the profiling phase. `uniform` draws every logit byte
// i.i.d. uniform (the softmax-input override on the open device);
// `model_driven` runs dataset inputs through the victim.
TraceSet capture_profiling_set(ProfilingSource source, int n, const LeakageConfig& cfg,
                               std::uint64_t seed, const qnn::QuantizedModel* model = nullptr,
                               const qnn::Dataset* data = nullptr);

struct AttackCapture {
  TraceSet traces;             // unlabeled
  qnn::LogitVector truth;      // evaluation-only; never fed to distinguishers
};

// n unlabeled traces of one inference, all from the same true logit vector.
AttackCapture capture_attack_set(const qnn::QuantizedModel& device,
                                 const qnn::QuantizedTensor& input, int n,
                                 const LeakageConfig& cfg, std::uint64_t seed);

}  // namespace ll::leaksim
