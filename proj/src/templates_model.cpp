#include "ll/templates_model.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace ll::sca {

namespace {

constexpr int kMaxRegularizationRetries = 16;
constexpr double kHalfLog2Pi = 0.9189385332046727;  // log(2*pi)/2

}  // namespace

TemplateModel fit_templates(const leaksim::TraceSet& ts, const PoiSelection& poi,
                            int byte_position, double reg_epsilon) {
  if (!ts.labeled()) throw DataError("template fitting needs labels");
  if (reg_epsilon <= 0.0) throw ConfigError("reg_epsilon must be > 0");
  const int d = static_cast<int>(poi.indices.size());

  TemplateModel model;
  model.byte_position = byte_position;
  model.dim = d;
  model.base_epsilon = reg_epsilon;
  model.classes.resize(kByteClasses);

  std::vector<int> count(kByteClasses, 0);
  std::vector<VectorD> sum(kByteClasses);
  std::vector<MatrixD> outer(kByteClasses);
  for (int i = 0; i < ts.count(); ++i) {
    const int cls = to_byte(ts.labels(i, byte_position));
    if (count[cls] == 0) {
      sum[cls] = VectorD::Zero(d);
      outer[cls] = MatrixD::Zero(d, d);
    }
    VectorD x = reduce_trace(ts.samples.row(i).transpose(), poi);
    sum[cls] += x;
    outer[cls].selfadjointView<Eigen::Lower>().rankUpdate(x);
    ++count[cls];
  }

  for (int cls = 0; cls < kByteClasses; ++cls) {
    auto& tmpl = model.classes[cls];
    if (count[cls] == 0) continue;

    tmpl.mean = sum[cls] / double(count[cls]);
    MatrixD cov = MatrixD::Zero(d, d);
    if (count[cls] >= 2) {
      cov = outer[cls].selfadjointView<Eigen::Lower>();
      cov -= double(count[cls]) * tmpl.mean * tmpl.mean.transpose();
      cov /= double(count[cls] - 1);
      cov = 0.5 * (cov + cov.transpose());
    }

    const double diag_mean = cov.diagonal().mean();
    const double unit = diag_mean > 0.0 ? diag_mean : 1.0;
    double eps = reg_epsilon;
    for (int attempt = 0; attempt < kMaxRegularizationRetries; ++attempt) {
      MatrixD reg = cov + eps * unit * MatrixD::Identity(d, d);
      Eigen::LLT<MatrixD> llt(reg);
      if (llt.info() == Eigen::Success) {
        tmpl.chol_lower = llt.matrixL();
        tmpl.log_det_half = tmpl.chol_lower.diagonal().array().log().sum();
        tmpl.reg_epsilon_used = eps;
        tmpl.profiled = true;
        break;
      }
      eps *= 10.0;
    }
    if (!tmpl.profiled) {
      throw DataError("covariance for class " + std::to_string(cls) +
                      " not positive definite after regularization retries");
    }
  }
  return model;
}

LogScores template_log_scores(const Eigen::Ref<const VectorF>& trace, const TemplateModel& model,
                              const PoiSelection& poi) {
  if (trace.size() <= (poi.indices.empty() ? 0 : poi.indices.back())) {
    throw DataError("trace shorter than PoI selection");
  }
  const VectorD x = reduce_trace(trace, poi);
  LogScores scores(kByteClasses);
  for (int cls = 0; cls < kByteClasses; ++cls) {
    const auto& tmpl = model.classes[cls];
    if (!tmpl.profiled) {
      scores[cls] = kUnprofiledScore;
      continue;
    }
    const VectorD solved =
        tmpl.chol_lower.triangularView<Eigen::Lower>().solve(x - tmpl.mean);
    scores[cls] = -0.5 * solved.squaredNorm() - tmpl.log_det_half - model.dim * kHalfLog2Pi;
  }
  return scores;
}

}  // namespace ll::sca
