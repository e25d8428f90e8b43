#include "ll/extractor.hpp"

#include <iostream>

namespace ll::extract {

std::string to_string(ScorerKind kind) {
  switch (kind) {
    case ScorerKind::template_attack: return "template";
    case ScorerKind::logreg: return "logreg";
    case ScorerKind::mlp: return "mlp";
  }
  return "?";
}

ScorerKind scorer_kind_from_string(const std::string& s) {
  if (s == "template") return ScorerKind::template_attack;
  if (s == "logreg") return ScorerKind::logreg;
  if (s == "mlp") return ScorerKind::mlp;
  throw ConfigError("unknown scorer kind: " + s);
}

LogScores PositionModel::score(const Eigen::Ref<const VectorF>& trace) const {
  if (kind == ScorerKind::template_attack) {
    return sca::template_log_scores(trace, *templates, poi);
  }
  return sca::neural_log_scores(trace, *net, poi);
}

sca::Scorer PositionModel::scorer() const {
  return [this](const Eigen::Ref<const VectorF>& trace) { return score(trace); };
}

qnn::LogitVector ProfiledExtractor::estimate(const leaksim::TraceSet& traces) const {
  if (traces.fingerprint != config_fingerprint) {
    throw DataError("trace set fingerprint does not match the profiled configuration");
  }
  std::vector<std::int8_t> values(positions.size());
  for (std::size_t p = 0; p < positions.size(); ++p) {
    const auto res = sca::map_accumulate(traces, positions[p].scorer());
    values[p] = from_byte(static_cast<std::uint8_t>(res.predicted));
  }
  return qnn::LogitVector(std::move(values));
}

std::vector<LogScores> ProfiledExtractor::accumulated_scores(
    const leaksim::TraceSet& traces) const {
  std::vector<LogScores> out;
  out.reserve(positions.size());
  for (const auto& pos : positions) {
    out.push_back(sca::map_accumulate(traces, pos.scorer()).accumulated);
  }
  return out;
}

ProfileResult profile(const leaksim::LeakageConfig& cfg, const ProfileOptions& opts,
                      std::uint64_t seed) {
  const int soft_floor = kByteClasses * cfg.num_classes;
  if (opts.n_profiling < soft_floor) {
    std::cerr << "warning: " << opts.n_profiling << " profiling traces is below the "
              << soft_floor << " soft floor; byte classes may go unobserved\n";
  }

  const leaksim::TraceSet profiling =
      leaksim::capture_profiling_set(leaksim::ProfilingSource::uniform, opts.n_profiling, cfg,
                                     derive_seed(seed, 0xA0));

  ProfileResult out;
  ProfiledExtractor& ex = out.extractor;
  ex.config_fingerprint = profiling.fingerprint;
  ex.traces_per_query = opts.traces_per_query;
  ex.provenance.profiling_seed = seed;
  ex.provenance.n_profiling = opts.n_profiling;
  ex.provenance.snr_threshold = opts.snr_threshold;
  ex.provenance.scorer = to_string(opts.kind);

  for (int p = 0; p < cfg.num_classes; ++p) {
    out.snr.push_back(sca::compute_snr(profiling, p));
    const sca::SnrProfile& snr = out.snr.back();
    PositionModel pos;
    pos.kind = opts.kind;
    try {
      const double threshold =
          sca::threshold_for_budget(snr, opts.snr_threshold, opts.max_poi);
      pos.poi = sca::select_poi(snr, threshold);
    } catch (const sca::PoiError& e) {
      throw sca::PoiError("position " + std::to_string(p) + ": " + e.what(), e.max_snr);
    }

    if (opts.kind == ScorerKind::template_attack) {
      pos.templates = sca::fit_templates(profiling, pos.poi, p, opts.reg_epsilon);
    } else {
      sca::NeuralSpec spec = opts.net_spec;
      if (opts.kind == ScorerKind::logreg) spec.hidden.clear();
      sca::NeuralHyper hyper = opts.net_hyper;
      hyper.seed = derive_seed(seed, 0xB0 + p);
      pos.net = sca::train_distinguisher(profiling, pos.poi, p, spec, hyper);
    }
    ex.positions.push_back(std::move(pos));
  }
  return out;
}

ExtractionResult extract_logits(const qnn::QuantizedModel& target,
                                const qnn::QuantizedTensor& input,
                                const ProfiledExtractor& ex, const leaksim::LeakageConfig& cfg,
                                std::uint64_t seed, bool evaluate) {
  if (leaksim::config_fingerprint(cfg) != ex.config_fingerprint) {
    throw DataError("attack capture config does not match the profiled configuration");
  }
  leaksim::AttackCapture cap =
      leaksim::capture_attack_set(target, input, ex.traces_per_query, cfg, seed);

  ExtractionResult res;
  res.estimate = ex.estimate(cap.traces);
  res.per_position = ex.accumulated_scores(cap.traces);
  res.traces_consumed = ex.traces_per_query;
  if (evaluate) res.correct = (res.estimate == cap.truth);
  return res;
}

LogitOracle::LogitOracle(const qnn::QuantizedModel& target, const ProfiledExtractor& ex,
                         const leaksim::LeakageConfig& cfg, std::uint64_t seed)
    : target_(&target), extractor_(&ex), cfg_(cfg), seed_(seed) {
  if (leaksim::config_fingerprint(cfg) != ex.config_fingerprint) {
    throw DataError("oracle config does not match the profiled configuration");
  }
}

OracleReply LogitOracle::query(const qnn::QuantizedTensor& input) {
  leaksim::AttackCapture cap = leaksim::capture_attack_set(
      *target_, input, extractor_->traces_per_query, cfg_,
      derive_seed(seed_, static_cast<std::uint64_t>(calls_)));
  ++calls_;
  traces_consumed_ += extractor_->traces_per_query;

  OracleReply reply;
  reply.logits = extractor_->estimate(cap.traces);
  reply.probabilities = qnn::nnom_softmax(reply.logits);
  reply.traces_consumed = traces_consumed_;
  return reply;
}

OracleReply LogitOracle::query_native(const VectorD& native) {
  return query(qnn::quantize_input_native(native));
}

}  // namespace ll::extract
