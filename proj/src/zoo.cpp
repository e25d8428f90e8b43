#include "ll/zoo.hpp"

#include "ll/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ll::advgen {

void validate(const AttackSpec& spec) {
  if (spec.max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (spec.coords_per_iter < 1) throw ConfigError("coords_per_iter must be >= 1");
  if (spec.box_lo >= spec.box_hi) throw ConfigError("box bounds must satisfy lo < hi");
  if (spec.step_h <= 0.0) throw ConfigError("step h must be > 0");
  // One int8 bucket spans one native unit under the device input map.
  if (spec.step_h < 1.0) {
    throw ConfigError("step h below one input quantization step produces dead gradients");
  }
  if (spec.mode == AttackSpec::Mode::targeted && spec.target_class < 0) {
    throw ConfigError("targeted mode needs a target class");
  }
}

extract::OracleReply ExactOracle::query(const VectorD& native) {
  extract::OracleReply reply;
  reply.logits = qnn::forward(*model_, qnn::quantize_input_native(native));
  reply.probabilities = qnn::nnom_softmax(reply.logits);
  return reply;
}

double fd_gradient_coord(const std::function<double(const VectorD&)>& f, const VectorD& x,
                         int coord, double h, double box_lo, double box_hi) {
  VectorD xp = x;
  VectorD xm = x;
  xp[coord] = std::clamp(x[coord] + h, box_lo, box_hi);
  xm[coord] = std::clamp(x[coord] - h, box_lo, box_hi);
  return (f(xp) - f(xm)) / (2.0 * h);
}

namespace {

bool is_adversarial(const qnn::LogitVector& logits, const AttackSpec& spec, int true_class) {
  const int cls = logits.argmax();
  return spec.mode == AttackSpec::Mode::targeted ? cls == spec.target_class
                                                 : cls != true_class;
}

}  // namespace

AttackReport zoo_attack(QueryOracle& oracle, const qnn::QuantizedModel& true_victim,
                        const VectorD& x0, int true_class, const AttackSpec& spec,
                        std::uint64_t seed) {
  validate(spec);

  AttackReport report;
  report.seed = seed;
  report.true_class = true_class;
  report.target_class = spec.mode == AttackSpec::Mode::targeted ? spec.target_class : -1;
  report.adversarial = x0;

  // Initial inference doubles as the precondition check.
  const extract::OracleReply initial = oracle.query(x0);
  report.verification_queries += 1;
  const int initial_class = initial.logits.argmax();
  if (spec.mode == AttackSpec::Mode::untargeted && initial_class != true_class) {
    report.input_rejected = true;
    report.oracle_queries = report.verification_queries;
    report.traces_consumed = oracle.traces_consumed();
    report.final_class = qnn::classify(true_victim, x0);
    return report;
  }
  if (spec.mode == AttackSpec::Mode::targeted && initial_class == spec.target_class) {
    report.input_rejected = true;
    report.oracle_queries = report.verification_queries;
    report.traces_consumed = oracle.traces_consumed();
    report.final_class = qnn::classify(true_victim, x0);
    return report;
  }

  const double span = spec.box_hi - spec.box_lo;
  bool probe_hit = false;
  // Loss from the extracted logits: the log-probability margin of an
  // unmasked softmax, which reduces to the logit margin. The device-side
  // masked probabilities plateau at the clamp once the victim is confident
  // and would zero out every finite difference.
  auto objective = [&](const VectorD& x) {
    const extract::OracleReply reply = oracle.query(x);
    if (is_adversarial(reply.logits, spec, true_class)) probe_hit = true;
    const double g =
        spec.mode == AttackSpec::Mode::targeted
            ? cw_logit_objective(reply.logits, spec.target_class, spec.kappa)
            : cw_logit_objective_untargeted(reply.logits, true_class, spec.kappa);
    return ((x - x0) / span).squaredNorm() + spec.c * g;
  };

  const int dim = static_cast<int>(x0.size());
  VectorD x = x0;
  VectorD adam_m = VectorD::Zero(dim);
  VectorD adam_v = VectorD::Zero(dim);
  Eigen::VectorXi adam_t = Eigen::VectorXi::Zero(dim);
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kAdamEps = 1e-8;

  Rng rng(derive_seed(seed, 0x200));
  std::vector<int> coords(dim);
  std::iota(coords.begin(), coords.end(), 0);

  for (int iter = 0; iter < spec.max_iters; ++iter) {
    // B distinct coordinates, uniform without replacement.
    const int b = std::min(spec.coords_per_iter, dim);
    for (int k = 0; k < b; ++k) {
      const int j = k + static_cast<int>(rng.next_below(dim - k));
      std::swap(coords[k], coords[j]);
    }

    probe_hit = false;
    double sum_obj = 0.0;
    double min_obj = std::numeric_limits<double>::infinity();
    for (int k = 0; k < b; ++k) {
      const int i = coords[k];
      VectorD xp = x, xm = x;
      xp[i] = std::clamp(x[i] + spec.step_h, spec.box_lo, spec.box_hi);
      xm[i] = std::clamp(x[i] - spec.step_h, spec.box_lo, spec.box_hi);
      const double fp = objective(xp);
      const double fm = objective(xm);
      report.fd_queries += 2;
      sum_obj += fp + fm;
      min_obj = std::min(min_obj, std::min(fp, fm));
      const double grad = (fp - fm) / (2.0 * spec.step_h);

      adam_t[i] += 1;
      adam_m[i] = kBeta1 * adam_m[i] + (1.0 - kBeta1) * grad;
      adam_v[i] = kBeta2 * adam_v[i] + (1.0 - kBeta2) * grad * grad;
      const double mhat = adam_m[i] / (1.0 - std::pow(kBeta1, adam_t[i]));
      const double vhat = adam_v[i] / (1.0 - std::pow(kBeta2, adam_t[i]));
      x[i] = std::clamp(x[i] - spec.learning_rate * mhat / (std::sqrt(vhat) + kAdamEps),
                        spec.box_lo, spec.box_hi);
    }

    report.iterations = iter + 1;
    report.objective_log.push_back(
        {iter, min_obj, sum_obj / (2.0 * b), distortion_l2(x0, x)});

    if (probe_hit) {
      // Stable-margin check: the oracle must agree on the updated input for
      // verifications_required consecutive fresh inferences.
      bool stable = true;
      for (int v = 0; v < oracle.verifications_required(); ++v) {
        const extract::OracleReply reply = oracle.query(x);
        report.verification_queries += 1;
        if (!is_adversarial(reply.logits, spec, true_class)) {
          stable = false;
          break;
        }
      }
      if (stable) {
        // Soundness: one fresh inference through the true victim.
        const int cls = qnn::classify(true_victim, x);
        const bool confirmed = spec.mode == AttackSpec::Mode::targeted
                                   ? cls == spec.target_class
                                   : cls != true_class;
        if (confirmed) {
          report.success = true;
          report.final_class = cls;
          report.adversarial = x;
          report.distortion = distortion_l2(x0, x);
          break;
        }
      }
    }
  }

  if (!report.success) {
    report.adversarial = x;
    report.distortion = distortion_l2(x0, x);
    report.final_class = qnn::classify(true_victim, x);
  }
  report.oracle_queries = report.fd_queries + report.verification_queries;
  report.traces_consumed = oracle.traces_consumed();
  return report;
}

}  // namespace ll::advgen
