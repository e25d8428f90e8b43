#pragma once

#include "ll/mlp.hpp"
#include "ll/snr.hpp"

namespace ll::sca {

inline constexpr double kScoreFloor = 1e-40;  // probability clamp before log

struct NeuralSpec {
  std::vector<int> hidden;  // empty = multinomial logistic regression
};

struct NeuralHyper {
  int epochs = 20;
  int batch = 512;
  double learning_rate = 1e-4;
  std::uint64_t seed = 0;
};

// Hyperparameters of the reference setup: logistic regression at lr 1e-5,
// the 1000/1000/100 ReLU MLP at lr 1e-4, both 20 epochs, batch 512.
NeuralSpec default_logreg_spec();
NeuralHyper default_logreg_hyper();
NeuralSpec default_mlp_spec();
NeuralHyper default_mlp_hyper();

struct NeuralDistinguisher {
  Mlp<float> net;
  VectorF feature_mean;   // standardization fitted on the profiling set
  VectorF feature_scale;
  TrainRecord record;
  int byte_position = 0;
};

// Supervised estimate of Pr[byte | trace] trained with categorical
// cross-entropy and the Adam rule over PoI-reduced traces.
NeuralDistinguisher train_distinguisher(const leaksim::TraceSet& ts, const PoiSelection& poi,
                                        int byte_position, const NeuralSpec& spec,
                                        const NeuralHyper& hyper);

// Log softmax outputs, clamped below at log(kScoreFloor).
LogScores neural_log_scores(const Eigen::Ref<const VectorF>& trace,
                            const NeuralDistinguisher& d, const PoiSelection& poi);

}  // namespace ll::sca
