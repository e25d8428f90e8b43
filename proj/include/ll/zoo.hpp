#pragma once

#include "ll/extractor.hpp"
#include "ll/objectives.hpp"

#include <functional>

namespace ll::advgen {

struct AttackSpec {
  enum class Mode { targeted, untargeted };
  Mode mode = Mode::untargeted;
  int target_class = -1;      // targeted mode only
  double kappa = 0.0;
  double c = 1.0;             // objective weight against the distortion term
  double step_h = 1.0;        // native units; at least one input quantization step
  double learning_rate = 2.0; // Adam step in native pixel units
  int max_iters = 10000;
  int coords_per_iter = 16;   // B
  double box_lo = 0.0;
  double box_hi = 255.0;
};

void validate(const AttackSpec& spec);

// Black-box probability oracle the optimizer queries.
class QueryOracle {
 public:
  virtual ~QueryOracle() = default;
  virtual extract::OracleReply query(const VectorD& native) = 0;
  // Consecutive agreeing replies required before trusting a success.
  virtual int verifications_required() const { return 1; }
  virtual long traces_consumed() const { return 0; }
};

// Exact logits straight from quantized inference (no side channel).
class ExactOracle : public QueryOracle {
 public:
  explicit ExactOracle(const qnn::QuantizedModel& model) : model_(&model) {}
  extract::OracleReply query(const VectorD& native) override;

 private:
  const qnn::QuantizedModel* model_;
};

// Logits recovered through the side channel; fresh extraction noise per
// query, so successes need three consecutive confirmations.
class ScaOracle : public QueryOracle {
 public:
  ScaOracle(const qnn::QuantizedModel& target, const extract::ProfiledExtractor& ex,
            const leaksim::LeakageConfig& cfg, std::uint64_t seed)
      : inner_(target, ex, cfg, seed) {}
  extract::OracleReply query(const VectorD& native) override { return inner_.query_native(native); }
  int verifications_required() const override { return 3; }
  long traces_consumed() const override { return inner_.traces_consumed(); }

 private:
  extract::LogitOracle inner_;
};

// Central difference (f(x+h e_i) - f(x-h e_i)) / 2h with probes clamped to
// the box. Exactly two evaluations of f.
double fd_gradient_coord(const std::function<double(const VectorD&)>& f, const VectorD& x,
                         int coord, double h, double box_lo, double box_hi);

struct IterationLog {
  int iteration = 0;
  double min_probe_objective = 0.0;
  double mean_probe_objective = 0.0;
  double distortion = 0.0;
};

struct AttackReport {
  bool success = false;
  bool input_rejected = false;
  int true_class = -1;
  int target_class = -1;  // -1 in untargeted mode
  int final_class = -1;   // true victim's class of the final input
  VectorD adversarial;
  double distortion = 0.0;
  int iterations = 0;
  long fd_queries = 0;
  long verification_queries = 0;
  long oracle_queries = 0;
  long traces_consumed = 0;
  std::uint64_t seed = 0;
  std::vector<IterationLog> objective_log;
};

// Zeroth-order coordinate descent on the perturbed-input objective
// ||(x-x0)/span||^2 + c * g, with per-coordinate Adam moments and finite
// differences through the oracle. Reported successes are re-verified by one
// fresh quantized inference through the true victim.
AttackReport zoo_attack(QueryOracle& oracle, const qnn::QuantizedModel& true_victim,
                        const VectorD& x0, int true_class, const AttackSpec& spec,
                        std::uint64_t seed);

}  // namespace ll::advgen
