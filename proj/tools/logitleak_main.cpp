// Command-line driver: train the victim, profile the leakage, evaluate the
// extraction, run the end-to-end attack, and emit plot data.

#include "ll/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitDataError = 3;
constexpr int kExitStageError = 4;

struct Overrides {
  std::string config_path;
  std::string out_dir;
  std::string scorer;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int n_traces = -1;
  double sigma = -1.0;
  int budget = -1;
};

ll::cli::ExperimentConfig load_with_overrides(const Overrides& ov) {
  ll::cli::ExperimentConfig cfg = ll::cli::load_config(ov.config_path);
  if (!ov.out_dir.empty()) cfg.out_dir = ov.out_dir;
  if (!ov.scorer.empty()) cfg.profiling.scorer = ov.scorer;
  if (ov.seed_set) {
    cfg.seeds.dataset = ll::derive_seed(ov.seed, 1);
    cfg.seeds.train = ll::derive_seed(ov.seed, 2);
    cfg.seeds.profile = ll::derive_seed(ov.seed, 3);
    cfg.seeds.eval = ll::derive_seed(ov.seed, 4);
    cfg.seeds.attack = ll::derive_seed(ov.seed, 5);
  }
  if (ov.n_traces > 0) cfg.profiling.n_traces = ov.n_traces;
  if (ov.sigma >= 0.0) cfg.leakage.noise_sigma = ov.sigma;
  if (ov.budget > 0) cfg.attack.max_iters = ov.budget;
  ll::cli::validate(cfg);
  return cfg;
}

void add_common(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config_path, "experiment config file")->required();
  cmd->add_option("--out", ov.out_dir, "output directory override");
  cmd->add_option("--seed", ov.seed, "master seed override (derives all stage seeds)")
      ->each([&ov](const std::string&) { ov.seed_set = true; });
  cmd->add_option("--scorer", ov.scorer, "scorer override: template|logreg|mlp");
  cmd->add_option("--n-traces", ov.n_traces, "profiling trace count override");
  cmd->add_option("--sigma", ov.sigma, "noise sigma override");
  cmd->add_option("--budget", ov.budget, "attack iteration budget override");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"black-box logit extraction and adversarial generation lab"};
  app.require_subcommand(1);

  Overrides ov;
  auto* train = app.add_subcommand("train-victim", "train and quantize the victim model");
  add_common(train, ov);
  auto* profile = app.add_subcommand("profile", "profiling phase: fit per-logit scorers");
  add_common(profile, ov);
  auto* eval = app.add_subcommand("eval-extraction", "success-rate curves per logit");
  add_common(eval, ov);
  auto* attack = app.add_subcommand("attack", "end-to-end black-box attack");
  add_common(attack, ov);
  auto* plot = app.add_subcommand("plotdata", "emit delimited plot files from a metrics bundle");
  add_common(plot, ov);

  auto* gen = app.add_subcommand("gen-digits", "write the bundled 8x8 digit set as IDX files");
  std::string gen_out = "data";
  int gen_train = 2000, gen_test = 500;
  std::uint64_t gen_seed = 9;
  gen->add_option("--out", gen_out, "output directory");
  gen->add_option("--train-count", gen_train, "training images");
  gen->add_option("--test-count", gen_test, "test images");
  gen->add_option("--seed", gen_seed, "generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      std::filesystem::create_directories(gen_out);
      const auto train_set = ll::qnn::make_digits(gen_train, gen_seed);
      const auto test_set = ll::qnn::make_digits(gen_test, ll::derive_seed(gen_seed, 1));
      ll::qnn::save_dataset(train_set, gen_out + "/digits-train-images.idx3",
                            gen_out + "/digits-train-labels.idx1");
      ll::qnn::save_dataset(test_set, gen_out + "/digits-test-images.idx3",
                            gen_out + "/digits-test-labels.idx1");
      std::cout << "wrote " << gen_train << " train / " << gen_test << " test digits to "
                << gen_out << "\n";
      return 0;
    }

    const ll::cli::ExperimentConfig cfg = load_with_overrides(ov);
    if (train->parsed()) {
      const auto report = ll::cli::run_train_victim(cfg);
      std::cout << ll::io::dump_json(report);
      if (!report.at("converged").get<bool>()) {
        std::cerr << "victim did not reach 0.90 held-out accuracy\n";
        return kExitStageError;
      }
    } else if (profile->parsed()) {
      std::cout << ll::io::dump_json(ll::cli::run_profile(cfg));
    } else if (eval->parsed()) {
      const auto bundle = ll::cli::run_eval_extraction(cfg);
      std::cout << "wrote " << cfg.metrics_file << " with " << bundle.curves.size()
                << " curves\n";
    } else if (attack->parsed()) {
      const auto bundle = ll::cli::run_attack_e2e(cfg);
      std::cout << "success rate " << bundle.summary.success_rate << " over "
                << bundle.summary.inputs << " inputs\n";
    } else if (plot->parsed()) {
      const auto bundle =
          ll::cli::metrics_from_json(ll::io::read_json(cfg.out_dir + "/" + cfg.metrics_file));
      const auto files = ll::cli::emit_plotdata(bundle, cfg.out_dir);
      std::cout << "wrote " << files.size() << " plot files\n";
    }
  } catch (const ll::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const ll::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStageError;
  }
  return 0;
}
