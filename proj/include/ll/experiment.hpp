#pragma once

#include "ll/bim.hpp"
#include "ll/serialize.hpp"

#include <string>
#include <vector>

namespace ll::cli {

using io::Json;

struct DatasetConfig {
  std::string train_images, train_labels, test_images, test_labels;
  int synth_train = 0;  // used when no paths are given
  int synth_test = 0;
};

struct ProfilingConfig {
  int n_traces = 50000;
  std::string scorer = "mlp";
  double snr_threshold = 0.05;
  int max_poi = 0;
  double reg_epsilon = 1e-3;
  std::vector<int> hidden{96, 48};
  int epochs = 20;
  int batch = 512;
  double learning_rate = 1e-3;
};

struct ExtractionConfig {
  int n_per_query = 5;
  int eval_max_traces = 10;
  int eval_repeats = 10;
};

struct AttackConfig {
  std::string mode = "untargeted";
  double kappa = 0.0;
  double c = 1.0;
  double step_h = 1.0;
  double learning_rate = 2.0;
  int max_iters = 10000;
  int coords_per_iter = 16;
  int num_inputs = 20;
  int workers = 2;
};

struct Seeds {
  std::uint64_t dataset = 0, train = 0, profile = 0, eval = 0, attack = 0;
};

struct VictimConfig {
  std::vector<int> hidden{32};
  int epochs = 60;
  int batch = 64;
  double learning_rate = 1e-3;
};

struct ExperimentConfig {
  std::string out_dir = "out";
  DatasetConfig dataset;
  VictimConfig victim;
  leaksim::LeakageConfig leakage;
  ProfilingConfig profiling;
  ExtractionConfig extraction;
  AttackConfig attack;
  advgen::BimSpec bim;
  Seeds seeds;
  std::string victim_file = "victim.json";
  std::string extractor_file = "extractor.json";
  std::string metrics_file = "metrics.json";
};

ExperimentConfig config_from_json(const Json& j);
ExperimentConfig load_config(const std::string& path);
Json config_to_json(const ExperimentConfig& cfg);

// Total validation before any heavy work: referenced files must exist and
// every stochastic stage must carry a seed.
void validate(const ExperimentConfig& cfg);

struct MetricsBundle {
  struct Curve {
    int position = 0;
    std::string scorer;
    int max_traces = 0;
    int repeats = 0;
    std::uint64_t seed = 0;
    VectorD values;
  };
  struct Snr {
    int position = 0;
    VectorD values;
  };
  struct Summary {
    int inputs = 0;
    int successes = 0;
    double success_rate = 0.0;
    double mean_l2 = 0.0;
    double mean_queries = 0.0;
    double mean_traces = 0.0;
    double bim_transfer_rate = -1.0;
    double bim_shadow_rate = -1.0;
    double bim_mean_l2 = -1.0;
  };

  std::vector<Curve> curves;
  std::vector<Snr> snr_profiles;
  std::vector<VectorD> attack_objectives;      // per input: per-iteration mean objective
  std::vector<VectorD> extraction_accuracy;    // per input: per-call 0/1 match series
  Summary summary;
};

Json metrics_to_json(const MetricsBundle& m);
MetricsBundle metrics_from_json(const Json& j);

qnn::Dataset resolve_train_set(const ExperimentConfig& cfg);
qnn::Dataset resolve_test_set(const ExperimentConfig& cfg);

// Pipeline drivers behind the CLI subcommands. Artifacts are byte-stable
// for fixed config and seeds; timestamps go to the sidecar run.log only.
Json run_train_victim(const ExperimentConfig& cfg);
Json run_profile(const ExperimentConfig& cfg);
MetricsBundle run_eval_extraction(const ExperimentConfig& cfg);
MetricsBundle run_attack_e2e(const ExperimentConfig& cfg);
std::vector<std::string> emit_plotdata(const MetricsBundle& m, const std::string& out_dir);

// Side-channel oracle wrapped with an evaluation tap that records per-call
// extraction correctness through a separate channel.
class InstrumentedScaOracle : public advgen::QueryOracle {
 public:
  InstrumentedScaOracle(const qnn::QuantizedModel& target, const extract::ProfiledExtractor& ex,
                        const leaksim::LeakageConfig& cfg, std::uint64_t seed)
      : inner_(target, ex, cfg, seed), target_(&target) {}

  extract::OracleReply query(const VectorD& native) override;
  int verifications_required() const override { return 3; }
  long traces_consumed() const override { return inner_.traces_consumed(); }
  const std::vector<double>& accuracy_series() const { return accuracy_; }

 private:
  extract::LogitOracle inner_;
  const qnn::QuantizedModel* target_;
  std::vector<double> accuracy_;
};

}  // namespace ll::cli
