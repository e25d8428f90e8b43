#include "ll/experiment.hpp"

#include "ll/trace_io.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <thread>

namespace ll::cli {

namespace {

namespace fs = std::filesystem;

leaksim::LeakModel leak_model_from_string(const std::string& s) {
  if (s == "hamming_weight") return leaksim::LeakModel::hamming_weight;
  if (s == "identity_byte") return leaksim::LeakModel::identity_byte;
  if (s == "weighted_bits") return leaksim::LeakModel::weighted_bits;
  throw ConfigError("unknown leak model: " + s);
}

std::string leak_model_to_string(leaksim::LeakModel m) {
  switch (m) {
    case leaksim::LeakModel::hamming_weight: return "hamming_weight";
    case leaksim::LeakModel::identity_byte: return "identity_byte";
    case leaksim::LeakModel::weighted_bits: return "weighted_bits";
  }
  return "?";
}

template <typename T>
void read_field(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void append_log(const ExperimentConfig& cfg, const std::string& line) {
  fs::create_directories(cfg.out_dir);
  std::ofstream log(fs::path(cfg.out_dir) / "run.log", std::ios::app);
  const auto now = std::chrono::system_clock::now();
  const auto t = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%S", std::gmtime(&t));
  log << stamp << " " << line << "\n";
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / name).string();
}

advgen::AttackSpec attack_spec_from_config(const ExperimentConfig& cfg) {
  advgen::AttackSpec spec;
  spec.mode = cfg.attack.mode == "targeted" ? advgen::AttackSpec::Mode::targeted
                                            : advgen::AttackSpec::Mode::untargeted;
  spec.kappa = cfg.attack.kappa;
  spec.c = cfg.attack.c;
  spec.step_h = cfg.attack.step_h;
  spec.learning_rate = cfg.attack.learning_rate;
  spec.max_iters = cfg.attack.max_iters;
  spec.coords_per_iter = cfg.attack.coords_per_iter;
  return spec;
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
  io::check_version(j, "experiment-config", io::kConfigFormatVersion);
  ExperimentConfig cfg;
  read_field(j, "out_dir", cfg.out_dir);
  read_field(j, "victim_file", cfg.victim_file);
  read_field(j, "extractor_file", cfg.extractor_file);
  read_field(j, "metrics_file", cfg.metrics_file);

  if (j.contains("dataset")) {
    const auto& d = j.at("dataset");
    read_field(d, "train_images", cfg.dataset.train_images);
    read_field(d, "train_labels", cfg.dataset.train_labels);
    read_field(d, "test_images", cfg.dataset.test_images);
    read_field(d, "test_labels", cfg.dataset.test_labels);
    read_field(d, "synth_train", cfg.dataset.synth_train);
    read_field(d, "synth_test", cfg.dataset.synth_test);
  }
  if (j.contains("victim")) {
    const auto& v = j.at("victim");
    read_field(v, "hidden", cfg.victim.hidden);
    read_field(v, "epochs", cfg.victim.epochs);
    read_field(v, "batch", cfg.victim.batch);
    read_field(v, "learning_rate", cfg.victim.learning_rate);
  }
  if (j.contains("leakage")) {
    const auto& l = j.at("leakage");
    read_field(l, "samples_per_event", cfg.leakage.samples_per_event);
    read_field(l, "pad_samples", cfg.leakage.pad_samples);
    read_field(l, "noise_sigma", cfg.leakage.noise_sigma);
    read_field(l, "leak_amplitude", cfg.leakage.leak_amplitude);
    read_field(l, "num_classes", cfg.leakage.num_classes);
    read_field(l, "device_seed", cfg.leakage.device_seed);
    if (l.contains("leak_model")) {
      cfg.leakage.leak_model = leak_model_from_string(l.at("leak_model").get<std::string>());
    }
  }
  if (j.contains("profiling")) {
    const auto& p = j.at("profiling");
    read_field(p, "n_traces", cfg.profiling.n_traces);
    read_field(p, "scorer", cfg.profiling.scorer);
    read_field(p, "snr_threshold", cfg.profiling.snr_threshold);
    read_field(p, "max_poi", cfg.profiling.max_poi);
    read_field(p, "reg_epsilon", cfg.profiling.reg_epsilon);
    read_field(p, "hidden", cfg.profiling.hidden);
    read_field(p, "epochs", cfg.profiling.epochs);
    read_field(p, "batch", cfg.profiling.batch);
    read_field(p, "learning_rate", cfg.profiling.learning_rate);
  }
  if (j.contains("extraction")) {
    const auto& e = j.at("extraction");
    read_field(e, "n_per_query", cfg.extraction.n_per_query);
    read_field(e, "eval_max_traces", cfg.extraction.eval_max_traces);
    read_field(e, "eval_repeats", cfg.extraction.eval_repeats);
  }
  if (j.contains("attack")) {
    const auto& a = j.at("attack");
    read_field(a, "mode", cfg.attack.mode);
    read_field(a, "kappa", cfg.attack.kappa);
    read_field(a, "c", cfg.attack.c);
    read_field(a, "step_h", cfg.attack.step_h);
    read_field(a, "learning_rate", cfg.attack.learning_rate);
    read_field(a, "max_iters", cfg.attack.max_iters);
    read_field(a, "coords_per_iter", cfg.attack.coords_per_iter);
    read_field(a, "num_inputs", cfg.attack.num_inputs);
    read_field(a, "workers", cfg.attack.workers);
  }
  if (j.contains("bim")) {
    const auto& b = j.at("bim");
    read_field(b, "epsilon", cfg.bim.epsilon);
    read_field(b, "alpha", cfg.bim.alpha);
    read_field(b, "iterations", cfg.bim.iterations);
  }
  if (!j.contains("seeds")) throw ConfigError("config is missing the seeds object");
  const auto& s = j.at("seeds");
  for (const char* key : {"dataset", "train", "profile", "eval", "attack"}) {
    if (!s.contains(key)) {
      throw ConfigError(std::string("missing seed '") + key +
                        "'; seeds are never auto-randomized");
    }
  }
  cfg.seeds.dataset = s.at("dataset").get<std::uint64_t>();
  cfg.seeds.train = s.at("train").get<std::uint64_t>();
  cfg.seeds.profile = s.at("profile").get<std::uint64_t>();
  cfg.seeds.eval = s.at("eval").get<std::uint64_t>();
  cfg.seeds.attack = s.at("attack").get<std::uint64_t>();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  ExperimentConfig cfg = config_from_json(io::read_json(path));
  validate(cfg);
  return cfg;
}

Json config_to_json(const ExperimentConfig& cfg) {
  Json j;
  j["format_version"] = io::kConfigFormatVersion;
  j["kind"] = "experiment-config";
  j["out_dir"] = cfg.out_dir;
  j["victim_file"] = cfg.victim_file;
  j["extractor_file"] = cfg.extractor_file;
  j["metrics_file"] = cfg.metrics_file;
  j["dataset"] = Json{{"train_images", cfg.dataset.train_images},
                      {"train_labels", cfg.dataset.train_labels},
                      {"test_images", cfg.dataset.test_images},
                      {"test_labels", cfg.dataset.test_labels},
                      {"synth_train", cfg.dataset.synth_train},
                      {"synth_test", cfg.dataset.synth_test}};
  j["victim"] = Json{{"hidden", cfg.victim.hidden},
                     {"epochs", cfg.victim.epochs},
                     {"batch", cfg.victim.batch},
                     {"learning_rate", cfg.victim.learning_rate}};
  j["leakage"] = Json{{"samples_per_event", cfg.leakage.samples_per_event},
                      {"pad_samples", cfg.leakage.pad_samples},
                      {"noise_sigma", cfg.leakage.noise_sigma},
                      {"leak_model", leak_model_to_string(cfg.leakage.leak_model)},
                      {"leak_amplitude", cfg.leakage.leak_amplitude},
                      {"device_seed", cfg.leakage.device_seed},
                      {"num_classes", cfg.leakage.num_classes}};
  j["profiling"] = Json{{"n_traces", cfg.profiling.n_traces},
                        {"scorer", cfg.profiling.scorer},
                        {"snr_threshold", cfg.profiling.snr_threshold},
                        {"max_poi", cfg.profiling.max_poi},
                        {"reg_epsilon", cfg.profiling.reg_epsilon},
                        {"hidden", cfg.profiling.hidden},
                        {"epochs", cfg.profiling.epochs},
                        {"batch", cfg.profiling.batch},
                        {"learning_rate", cfg.profiling.learning_rate}};
  j["extraction"] = Json{{"n_per_query", cfg.extraction.n_per_query},
                         {"eval_max_traces", cfg.extraction.eval_max_traces},
                         {"eval_repeats", cfg.extraction.eval_repeats}};
  j["attack"] = Json{{"mode", cfg.attack.mode},
                     {"kappa", cfg.attack.kappa},
                     {"c", cfg.attack.c},
                     {"step_h", cfg.attack.step_h},
                     {"learning_rate", cfg.attack.learning_rate},
                     {"max_iters", cfg.attack.max_iters},
                     {"coords_per_iter", cfg.attack.coords_per_iter},
                     {"num_inputs", cfg.attack.num_inputs},
                     {"workers", cfg.attack.workers}};
  j["bim"] = Json{{"epsilon", cfg.bim.epsilon},
                  {"alpha", cfg.bim.alpha},
                  {"iterations", cfg.bim.iterations}};
  j["seeds"] = Json{{"dataset", cfg.seeds.dataset},
                    {"train", cfg.seeds.train},
                    {"profile", cfg.seeds.profile},
                    {"eval", cfg.seeds.eval},
                    {"attack", cfg.seeds.attack}};
  return j;
}

void validate(const ExperimentConfig& cfg) {
  leaksim::validate(cfg.leakage);
  if (cfg.profiling.n_traces < 1) throw ConfigError("profiling n_traces must be >= 1");
  if (cfg.extraction.n_per_query < 1) throw ConfigError("n_per_query must be >= 1");
  if (cfg.attack.mode != "targeted" && cfg.attack.mode != "untargeted") {
    throw ConfigError("attack mode must be targeted or untargeted");
  }
  extract::scorer_kind_from_string(cfg.profiling.scorer);
  const bool have_paths = !cfg.dataset.train_images.empty();
  if (have_paths) {
    for (const std::string& p : {cfg.dataset.train_images, cfg.dataset.train_labels,
                                 cfg.dataset.test_images, cfg.dataset.test_labels}) {
      if (!fs::exists(p)) throw ConfigError("referenced file does not exist: " + p);
    }
  } else if (cfg.dataset.synth_train < 10 || cfg.dataset.synth_test < 10) {
    throw ConfigError("synthetic dataset needs synth_train and synth_test >= 10");
  }
}

qnn::Dataset resolve_train_set(const ExperimentConfig& cfg) {
  if (!cfg.dataset.train_images.empty()) {
    return qnn::load_dataset(cfg.dataset.train_images, cfg.dataset.train_labels);
  }
  return qnn::make_digits(cfg.dataset.synth_train, cfg.seeds.dataset);
}

qnn::Dataset resolve_test_set(const ExperimentConfig& cfg) {
  if (!cfg.dataset.test_images.empty()) {
    return qnn::load_dataset(cfg.dataset.test_images, cfg.dataset.test_labels);
  }
  return qnn::make_digits(cfg.dataset.synth_test, derive_seed(cfg.seeds.dataset, 1));
}

Json run_train_victim(const ExperimentConfig& cfg) {
  validate(cfg);
  append_log(cfg, "train-victim start");
  const qnn::Dataset train = resolve_train_set(cfg);
  const qnn::Dataset test = resolve_test_set(cfg);

  qnn::VictimArch arch = qnn::default_victim_arch();
  arch.hidden = cfg.victim.hidden;
  arch.train.epochs = cfg.victim.epochs;
  arch.train.batch = cfg.victim.batch;
  arch.train.learning_rate = cfg.victim.learning_rate;

  const qnn::TrainedVictim victim = qnn::train_victim(train, test, arch, cfg.seeds.train);
  io::write_json(out_path(cfg, cfg.victim_file), io::victim_to_json(victim));

  Json report;
  report["format_version"] = 1;
  report["kind"] = "train-report";
  report["train_accuracy"] = victim.train_accuracy;
  report["test_accuracy"] = victim.test_accuracy;
  report["quantized_test_accuracy"] = victim.quantized_test_accuracy;
  report["model_hash"] = victim.quantized.content_hash();
  report["converged"] = victim.quantized_test_accuracy >= 0.90;
  io::write_json(out_path(cfg, "train-report.json"), report);
  append_log(cfg, "train-victim done");
  return report;
}

Json run_profile(const ExperimentConfig& cfg) {
  validate(cfg);
  append_log(cfg, "profile start");
  extract::ProfileOptions opts;
  opts.n_profiling = cfg.profiling.n_traces;
  opts.kind = extract::scorer_kind_from_string(cfg.profiling.scorer);
  opts.snr_threshold = cfg.profiling.snr_threshold;
  opts.max_poi = cfg.profiling.max_poi;
  opts.reg_epsilon = cfg.profiling.reg_epsilon;
  opts.net_spec.hidden = cfg.profiling.hidden;
  opts.net_hyper.epochs = cfg.profiling.epochs;
  opts.net_hyper.batch = cfg.profiling.batch;
  opts.net_hyper.learning_rate = cfg.profiling.learning_rate;
  opts.traces_per_query = cfg.extraction.n_per_query;

  const extract::ProfileResult result = extract::profile(cfg.leakage, opts, cfg.seeds.profile);
  io::write_json(out_path(cfg, cfg.extractor_file), io::extractor_to_json(result.extractor));

  // SNR plot data, one delimited file per logit position.
  for (std::size_t p = 0; p < result.snr.size(); ++p) {
    std::ofstream f(out_path(cfg, "snr_pos" + std::to_string(p) + ".tsv"), std::ios::trunc);
    f << "# sample\tsnr\n";
    for (int t = 0; t < result.snr[p].values.size(); ++t) {
      f << t << "\t" << result.snr[p].values[t] << "\n";
    }
  }

  Json summary;
  summary["format_version"] = 1;
  summary["kind"] = "profile-report";
  summary["config_fingerprint"] = result.extractor.config_fingerprint;
  summary["positions"] = result.extractor.num_positions();
  Json peaks = Json::array();
  Json poi_sizes = Json::array();
  for (int p = 0; p < result.extractor.num_positions(); ++p) {
    double peak = 0.0;
    for (int t = 0; t < result.snr[p].values.size(); ++t) {
      if (std::isfinite(result.snr[p].values[t])) peak = std::max(peak, result.snr[p].values[t]);
    }
    peaks.push_back(peak);
    poi_sizes.push_back(result.extractor.positions[p].poi.indices.size());
  }
  summary["peak_snr"] = std::move(peaks);
  summary["poi_sizes"] = std::move(poi_sizes);
  io::write_json(out_path(cfg, "profile-report.json"), summary);
  append_log(cfg, "profile done");
  return summary;
}

MetricsBundle run_eval_extraction(const ExperimentConfig& cfg) {
  validate(cfg);
  append_log(cfg, "eval-extraction start");
  const extract::ProfiledExtractor ex =
      io::extractor_from_json(io::read_json(out_path(cfg, cfg.extractor_file)));
  if (ex.config_fingerprint != leaksim::config_fingerprint(cfg.leakage)) {
    throw DataError("extractor bundle was profiled under a different leakage config");
  }

  // One evaluation logit vector; every position scores the same captures.
  Rng rng(derive_seed(cfg.seeds.eval, 0x51));
  std::vector<std::int8_t> zv(cfg.leakage.num_classes);
  for (auto& b : zv) b = from_byte(rng.next_byte());
  const qnn::LogitVector z_eval(std::move(zv));

  auto factory = [&](std::uint64_t rep_seed) {
    leaksim::TraceSet set;
    set.fingerprint = leaksim::config_fingerprint(cfg.leakage);
    set.num_classes = cfg.leakage.num_classes;
    set.creation_seed = rep_seed;
    set.samples.resize(cfg.extraction.eval_max_traces, leaksim::trace_length(cfg.leakage));
    for (int i = 0; i < cfg.extraction.eval_max_traces; ++i) {
      Rng trace_rng(derive_seed(rep_seed, i));
      leaksim::simulate_row(z_eval, cfg.leakage, trace_rng, set.samples.row(i).data());
    }
    return set;
  };

  MetricsBundle bundle;
  for (int p = 0; p < ex.num_positions(); ++p) {
    MetricsBundle::Curve curve;
    curve.position = p;
    curve.scorer = cfg.profiling.scorer;
    curve.max_traces = cfg.extraction.eval_max_traces;
    curve.repeats = cfg.extraction.eval_repeats;
    curve.seed = cfg.seeds.eval;
    curve.values = sca::success_rate_curve(factory, z_eval.byte(p), cfg.extraction.eval_max_traces,
                                           cfg.extraction.eval_repeats, cfg.seeds.eval,
                                           ex.positions[p].scorer());
    bundle.curves.push_back(std::move(curve));
  }

  io::write_json(out_path(cfg, cfg.metrics_file), metrics_to_json(bundle));
  append_log(cfg, "eval-extraction done");
  return bundle;
}

extract::OracleReply InstrumentedScaOracle::query(const VectorD& native) {
  extract::OracleReply reply = inner_.query_native(native);
  // Evaluation channel only; the estimate above never sees these logits.
  const qnn::LogitVector truth = qnn::forward(*target_, qnn::quantize_input_native(native));
  accuracy_.push_back(reply.logits == truth ? 1.0 : 0.0);
  return reply;
}

MetricsBundle run_attack_e2e(const ExperimentConfig& cfg) {
  validate(cfg);
  append_log(cfg, "attack start");
  const qnn::TrainedVictim victim =
      io::victim_from_json(io::read_json(out_path(cfg, cfg.victim_file)));
  const extract::ProfiledExtractor ex =
      io::extractor_from_json(io::read_json(out_path(cfg, cfg.extractor_file)));

  const qnn::Dataset test = resolve_test_set(cfg);
  std::vector<int> chosen;
  for (int i = 0; i < test.count() && int(chosen.size()) < cfg.attack.num_inputs; ++i) {
    VectorD nat = test.images.row(i).cast<double>().transpose();
    if (qnn::classify(victim.quantized, nat) == test.labels[i]) chosen.push_back(i);
  }

  const advgen::AttackSpec base_spec = attack_spec_from_config(cfg);
  struct PerInput {
    advgen::AttackReport report;
    advgen::BimResult bim;
    std::vector<double> accuracy;
  };
  std::vector<PerInput> results(chosen.size());

  auto run_one = [&](std::size_t k) {
    const int idx = chosen[k];
    const VectorD x0 = test.images.row(idx).cast<double>().transpose();
    const int label = test.labels[idx];
    advgen::AttackSpec spec = base_spec;
    if (spec.mode == advgen::AttackSpec::Mode::targeted) {
      spec.target_class = (label + 1) % cfg.leakage.num_classes;
    }
    InstrumentedScaOracle oracle(victim.quantized, ex, cfg.leakage,
                                 derive_seed(cfg.seeds.attack, 0x900 + idx));
    results[k].report = advgen::zoo_attack(oracle, victim.quantized, x0, label, spec,
                                           derive_seed(cfg.seeds.attack, idx));
    results[k].accuracy = oracle.accuracy_series();
    results[k].bim = advgen::bim_whitebox_baseline(victim.shadow, victim.quantized, x0, label,
                                                   cfg.bim);
  };

  const int workers = std::max(1, cfg.attack.workers);
  if (workers == 1 || chosen.size() < 2) {
    for (std::size_t k = 0; k < chosen.size(); ++k) run_one(k);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        for (;;) {
          const std::size_t k = next.fetch_add(1);
          if (k >= chosen.size()) return;
          run_one(k);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  MetricsBundle bundle;
  qnn::Dataset adversarial;
  adversarial.rows = test.rows;
  adversarial.cols = test.cols;
  adversarial.images.resize(0, test.pixels());

  int successes = 0, bim_shadow = 0, bim_transfer = 0;
  double sum_l2 = 0, sum_queries = 0, sum_traces = 0, bim_l2 = 0;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto& r = results[k].report;
    io::write_json(out_path(cfg, "attack-report-" + std::to_string(k) + ".json"),
                   io::report_to_json(r, base_spec));
    if (r.success) {
      ++successes;
      sum_l2 += r.distortion;
      adversarial.images.conservativeResize(adversarial.images.rows() + 1, Eigen::NoChange);
      for (int p = 0; p < test.pixels(); ++p) {
        adversarial.images(adversarial.images.rows() - 1, p) =
            static_cast<float>(r.adversarial[p]);
      }
      adversarial.labels.push_back(r.final_class);
    }
    sum_queries += double(r.oracle_queries);
    sum_traces += double(r.traces_consumed);
    if (results[k].bim.fools_shadow) {
      ++bim_shadow;
      bim_l2 += results[k].bim.distortion;
      if (results[k].bim.fools_victim) ++bim_transfer;
    }
    VectorD obj(r.objective_log.size());
    for (std::size_t i = 0; i < r.objective_log.size(); ++i) {
      obj[static_cast<int>(i)] = r.objective_log[i].mean_probe_objective;
    }
    bundle.attack_objectives.push_back(std::move(obj));
    VectorD acc(results[k].accuracy.size());
    for (std::size_t i = 0; i < results[k].accuracy.size(); ++i) {
      acc[static_cast<int>(i)] = results[k].accuracy[i];
    }
    bundle.extraction_accuracy.push_back(std::move(acc));
  }

  bundle.summary.inputs = static_cast<int>(results.size());
  bundle.summary.successes = successes;
  bundle.summary.success_rate = results.empty() ? 0.0 : double(successes) / results.size();
  bundle.summary.mean_l2 = successes ? sum_l2 / successes : 0.0;
  bundle.summary.mean_queries = results.empty() ? 0.0 : sum_queries / results.size();
  bundle.summary.mean_traces = results.empty() ? 0.0 : sum_traces / results.size();
  bundle.summary.bim_shadow_rate =
      results.empty() ? 0.0 : double(bim_shadow) / results.size();
  bundle.summary.bim_transfer_rate = bim_shadow ? double(bim_transfer) / bim_shadow : 0.0;
  bundle.summary.bim_mean_l2 = bim_shadow ? bim_l2 / bim_shadow : 0.0;

  if (adversarial.count() > 0) {
    qnn::save_dataset(adversarial, out_path(cfg, "adversarial-images.idx3"),
                      out_path(cfg, "adversarial-labels.idx1"));
  }
  io::write_json(out_path(cfg, cfg.metrics_file), metrics_to_json(bundle));
  append_log(cfg, "attack done");
  return bundle;
}

Json metrics_to_json(const MetricsBundle& m) {
  Json j;
  j["format_version"] = io::kMetricsFormatVersion;
  j["kind"] = "metrics-bundle";
  Json curves = Json::array();
  for (const auto& c : m.curves) {
    curves.push_back(Json{{"position", c.position},
                          {"scorer", c.scorer},
                          {"max_traces", c.max_traces},
                          {"repeats", c.repeats},
                          {"seed", c.seed},
                          {"values", std::vector<double>(c.values.data(),
                                                         c.values.data() + c.values.size())}});
  }
  j["curves"] = std::move(curves);
  Json snr = Json::array();
  for (const auto& s : m.snr_profiles) {
    snr.push_back(Json{{"position", s.position},
                       {"values", std::vector<double>(s.values.data(),
                                                      s.values.data() + s.values.size())}});
  }
  j["snr_profiles"] = std::move(snr);
  auto rows = [](const std::vector<VectorD>& vs) {
    Json arr = Json::array();
    for (const auto& v : vs) {
      arr.push_back(std::vector<double>(v.data(), v.data() + v.size()));
    }
    return arr;
  };
  j["attack_objectives"] = rows(m.attack_objectives);
  j["extraction_accuracy"] = rows(m.extraction_accuracy);
  j["summary"] = Json{{"inputs", m.summary.inputs},
                      {"successes", m.summary.successes},
                      {"success_rate", m.summary.success_rate},
                      {"mean_l2", m.summary.mean_l2},
                      {"mean_queries", m.summary.mean_queries},
                      {"mean_traces", m.summary.mean_traces},
                      {"bim_transfer_rate", m.summary.bim_transfer_rate},
                      {"bim_shadow_rate", m.summary.bim_shadow_rate},
                      {"bim_mean_l2", m.summary.bim_mean_l2}};
  return j;
}

MetricsBundle metrics_from_json(const Json& j) {
  io::check_version(j, "metrics-bundle", io::kMetricsFormatVersion);
  MetricsBundle m;
  auto to_vec = [](const Json& arr) {
    VectorD v(arr.size());
    int i = 0;
    for (const auto& x : arr) v[i++] = x.get<double>();
    return v;
  };
  for (const auto& c : j.at("curves")) {
    MetricsBundle::Curve curve;
    curve.position = c.at("position").get<int>();
    curve.scorer = c.at("scorer").get<std::string>();
    curve.max_traces = c.at("max_traces").get<int>();
    curve.repeats = c.at("repeats").get<int>();
    curve.seed = c.at("seed").get<std::uint64_t>();
    curve.values = to_vec(c.at("values"));
    m.curves.push_back(std::move(curve));
  }
  for (const auto& s : j.at("snr_profiles")) {
    m.snr_profiles.push_back({s.at("position").get<int>(), to_vec(s.at("values"))});
  }
  for (const auto& a : j.at("attack_objectives")) m.attack_objectives.push_back(to_vec(a));
  for (const auto& a : j.at("extraction_accuracy")) m.extraction_accuracy.push_back(to_vec(a));
  const auto& s = j.at("summary");
  m.summary.inputs = s.at("inputs").get<int>();
  m.summary.successes = s.at("successes").get<int>();
  m.summary.success_rate = s.at("success_rate").get<double>();
  m.summary.mean_l2 = s.at("mean_l2").get<double>();
  m.summary.mean_queries = s.at("mean_queries").get<double>();
  m.summary.mean_traces = s.at("mean_traces").get<double>();
  m.summary.bim_transfer_rate = s.at("bim_transfer_rate").get<double>();
  m.summary.bim_shadow_rate = s.at("bim_shadow_rate").get<double>();
  m.summary.bim_mean_l2 = s.at("bim_mean_l2").get<double>();
  return m;
}

std::vector<std::string> emit_plotdata(const MetricsBundle& m, const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::vector<std::string> written;
  auto open = [&](const std::string& name) {
    const std::string path = (fs::path(out_dir) / name).string();
    written.push_back(path);
    return std::ofstream(path, std::ios::trunc);
  };

  for (const auto& c : m.curves) {
    auto f = open("plot_success_" + c.scorer + "_pos" + std::to_string(c.position) + ".tsv");
    f << "# traces\tsuccess_rate\n";
    for (int k = 0; k < c.values.size(); ++k) f << (k + 1) << "\t" << c.values[k] << "\n";
  }
  for (const auto& s : m.snr_profiles) {
    auto f = open("plot_snr_pos" + std::to_string(s.position) + ".tsv");
    f << "# sample\tsnr\n";
    for (int t = 0; t < s.values.size(); ++t) f << t << "\t" << s.values[t] << "\n";
  }
  for (std::size_t i = 0; i < m.attack_objectives.size(); ++i) {
    auto f = open("plot_attack_objective_in" + std::to_string(i) + ".tsv");
    f << "# iteration\tmean_objective\n";
    const auto& v = m.attack_objectives[i];
    for (int t = 0; t < v.size(); ++t) f << t << "\t" << v[t] << "\n";
  }
  for (std::size_t i = 0; i < m.extraction_accuracy.size(); ++i) {
    auto f = open("plot_extraction_accuracy_in" + std::to_string(i) + ".tsv");
    f << "# call\tcorrect\n";
    const auto& v = m.extraction_accuracy[i];
    for (int t = 0; t < v.size(); ++t) f << t << "\t" << v[t] << "\n";
  }
  {
    auto f = open("plot_summary.tsv");
    f << "# key\tvalue\n";
    if (m.summary.inputs > 0) {
      f << "inputs\t" << m.summary.inputs << "\n";
      f << "successes\t" << m.summary.successes << "\n";
      f << "success_rate\t" << m.summary.success_rate << "\n";
      f << "mean_l2\t" << m.summary.mean_l2 << "\n";
      f << "mean_queries\t" << m.summary.mean_queries << "\n";
      f << "mean_traces\t" << m.summary.mean_traces << "\n";
      f << "bim_shadow_rate\t" << m.summary.bim_shadow_rate << "\n";
      f << "bim_transfer_rate\t" << m.summary.bim_transfer_rate << "\n";
      f << "bim_mean_l2\t" << m.summary.bim_mean_l2 << "\n";
    }
  }
  return written;
}

}  // namespace ll::cli
