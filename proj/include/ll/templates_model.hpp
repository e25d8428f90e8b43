#pragma once

#include "ll/snr.hpp"

namespace ll::sca {

// Score handed to unprofiled classes so they can never win the argmax while
// keeping accumulated scores finite.
inline constexpr double kUnprofiledScore = -1e300;

struct ClassTemplate {
  VectorD mean;
  MatrixD chol_lower;   // L with L*L^T = regularized covariance
  double log_det_half = 0.0;
  double reg_epsilon_used = 0.0;
  bool profiled = false;
};

struct TemplateModel {
  std::vector<ClassTemplate> classes;  // kByteClasses entries
  int byte_position = 0;
  int dim = 0;
  double base_epsilon = 0.0;
};

// Gaussian templates over PoI-reduced traces: per class sample mean and
// covariance, diagonally loaded (epsilon * mean diagonal, escalating x10)
// until the Cholesky factorization succeeds.
TemplateModel fit_templates(const leaksim::TraceSet& ts, const PoiSelection& poi,
                            int byte_position, double reg_epsilon);

// Log Gaussian density per class, computed through the Cholesky factor.
LogScores template_log_scores(const Eigen::Ref<const VectorF>& trace, const TemplateModel& model,
                              const PoiSelection& poi);

}  // namespace ll::sca
