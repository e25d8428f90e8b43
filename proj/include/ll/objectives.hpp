#pragma once

#include "ll/common.hpp"
#include "ll/model.hpp"

namespace ll::advgen {

inline constexpr double kProbabilityFloor = 1e-40;

// Margin loss on logits: max(max_{i != target} z[i] - z[target], -kappa).
// Equal to the log-probability margin under an unmasked softmax, since
// log-softmax differences cancel the normalizer.
double cw_logit_objective(const VectorD& logits, int target, double kappa);
double cw_logit_objective(const qnn::LogitVector& logits, int target, double kappa);
double cw_logit_objective_untargeted(const VectorD& logits, int true_class, double kappa);
double cw_logit_objective_untargeted(const qnn::LogitVector& logits, int true_class,
                                     double kappa);

// Same margin on log probabilities; zero entries are clamped before the log.
double zoo_log_objective(const VectorD& probabilities, int target, double kappa);

// Untargeted variant: drive the true class below the runner-up.
double zoo_log_objective_untargeted(const VectorD& probabilities, int true_class, double kappa);

double distortion_l2(const VectorD& original, const VectorD& perturbed);

}  // namespace ll::advgen
