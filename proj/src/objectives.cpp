#include "ll/objectives.hpp"

#include <cmath>

namespace ll::advgen {

namespace {

void check_class(int cls, int n) {
  if (cls < 0 || cls >= n) throw DataError("class index " + std::to_string(cls) + " out of range");
}

double max_other(const VectorD& v, int skip) {
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < v.size(); ++i) {
    if (i != skip) best = std::max(best, v[i]);
  }
  return best;
}

}  // namespace

double cw_logit_objective(const VectorD& logits, int target, double kappa) {
  check_class(target, static_cast<int>(logits.size()));
  return std::max(max_other(logits, target) - logits[target], -kappa);
}

double cw_logit_objective(const qnn::LogitVector& logits, int target, double kappa) {
  VectorD z(logits.size());
  for (int i = 0; i < logits.size(); ++i) z[i] = logits[i];
  return cw_logit_objective(z, target, kappa);
}

double cw_logit_objective_untargeted(const VectorD& logits, int true_class, double kappa) {
  check_class(true_class, static_cast<int>(logits.size()));
  return std::max(logits[true_class] - max_other(logits, true_class), -kappa);
}

double cw_logit_objective_untargeted(const qnn::LogitVector& logits, int true_class,
                                     double kappa) {
  VectorD z(logits.size());
  for (int i = 0; i < logits.size(); ++i) z[i] = logits[i];
  return cw_logit_objective_untargeted(z, true_class, kappa);
}

double zoo_log_objective(const VectorD& probabilities, int target, double kappa) {
  check_class(target, static_cast<int>(probabilities.size()));
  VectorD lf = probabilities.cwiseMax(kProbabilityFloor).array().log();
  return std::max(max_other(lf, target) - lf[target], -kappa);
}

double zoo_log_objective_untargeted(const VectorD& probabilities, int true_class, double kappa) {
  check_class(true_class, static_cast<int>(probabilities.size()));
  VectorD lf = probabilities.cwiseMax(kProbabilityFloor).array().log();
  return std::max(lf[true_class] - max_other(lf, true_class), -kappa);
}

double distortion_l2(const VectorD& original, const VectorD& perturbed) {
  if (original.size() != perturbed.size()) throw DataError("distortion: shape mismatch");
  return (perturbed - original).norm();
}

}  // namespace ll::advgen
