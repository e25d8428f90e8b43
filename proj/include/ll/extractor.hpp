#pragma once

#include "ll/distinguisher.hpp"
#include "ll/map_attack.hpp"
#include "ll/templates_model.hpp"

#include <optional>

namespace ll::extract {

enum class ScorerKind { template_attack, logreg, mlp };

std::string to_string(ScorerKind kind);
ScorerKind scorer_kind_from_string(const std::string& s);

struct PositionModel {
  sca::PoiSelection poi;
  ScorerKind kind = ScorerKind::mlp;
  std::optional<sca::TemplateModel> templates;
  std::optional<sca::NeuralDistinguisher> net;

  LogScores score(const Eigen::Ref<const VectorF>& trace) const;
  sca::Scorer scorer() const;
};

struct ProfileOptions {
  int n_profiling = 50000;
  ScorerKind kind = ScorerKind::mlp;
  double snr_threshold = 0.05;
  int max_poi = 0;  // 0 = no budget; otherwise raises the threshold to fit
  double reg_epsilon = 1e-3;
  sca::NeuralSpec net_spec;    // used for logreg/mlp kinds
  sca::NeuralHyper net_hyper;
  int traces_per_query = 5;
};

struct ExtractorProvenance {
  std::uint64_t profiling_seed = 0;
  int n_profiling = 0;
  double snr_threshold = 0.0;
  std::string scorer;
};

// One fitted scorer per logit position, all reading the same shared capture.
struct ProfiledExtractor {
  std::vector<PositionModel> positions;
  std::uint64_t config_fingerprint = 0;
  int traces_per_query = 5;
  ExtractorProvenance provenance;

  int num_positions() const { return static_cast<int>(positions.size()); }
  qnn::LogitVector estimate(const leaksim::TraceSet& traces) const;
  std::vector<LogScores> accumulated_scores(const leaksim::TraceSet& traces) const;
};

struct ProfileResult {
  ProfiledExtractor extractor;
  std::vector<sca::SnrProfile> snr;  // one per position
};

// Profiling phase on the open device: uniform-logit capture, per-position
// SNR, PoI selection and scorer fit. The soft floor keeps every byte class
// populated; below it a warning is emitted on stderr.
ProfileResult profile(const leaksim::LeakageConfig& cfg, const ProfileOptions& opts,
                      std::uint64_t seed);

struct ExtractionResult {
  qnn::LogitVector estimate;
  std::vector<LogScores> per_position;
  long traces_consumed = 0;
  std::optional<bool> correct;  // evaluation mode only
};

// Attack phase: capture n traces of one inference and run the per-position
// MAP accumulation. Refuses captures from a different leakage config.
ExtractionResult extract_logits(const qnn::QuantizedModel& target,
                                const qnn::QuantizedTensor& input,
                                const ProfiledExtractor& ex, const leaksim::LeakageConfig& cfg,
                                std::uint64_t seed, bool evaluate = false);

struct OracleReply {
  qnn::LogitVector logits;
  VectorD probabilities;
  long traces_consumed = 0;
};

// Black-box logit oracle: input -> (extracted logits, masked-softmax
// probabilities). Ground truth stays inside the simulated device; the
// estimation path sees only unlabeled traces. Cost model C = O(n * m_adv)
// tracked by the trace counter.
class LogitOracle {
 public:
  LogitOracle(const qnn::QuantizedModel& target, const ProfiledExtractor& ex,
              const leaksim::LeakageConfig& cfg, std::uint64_t seed);

  OracleReply query(const qnn::QuantizedTensor& input);
  OracleReply query_native(const VectorD& native);

  long traces_consumed() const { return traces_consumed_; }
  long calls() const { return calls_; }

 private:
  const qnn::QuantizedModel* target_;
  const ProfiledExtractor* extractor_;
  leaksim::LeakageConfig cfg_;
  std::uint64_t seed_;
  long traces_consumed_ = 0;
  long calls_ = 0;
};

}  // namespace ll::extract
