#include "ll/train.hpp"

namespace ll::qnn {

VictimArch default_victim_arch() {
  VictimArch arch;
  arch.hidden = {32};
  arch.num_classes = 10;
  arch.train.epochs = 60;
  arch.train.batch = 64;
  arch.train.learning_rate = 1e-3;
  arch.train.val_fraction = 0.1;
  return arch;
}

namespace {

double float_accuracy(const Mlp<double>& net, const Dataset& ds) {
  int correct = 0;
  for (int i = 0; i < ds.count(); ++i) {
    VectorD nat = ds.images.row(i).cast<double>().transpose();
    if (net.argmax(normalize_input_native(nat)) == ds.labels[i]) ++correct;
  }
  return double(correct) / ds.count();
}

double quantized_accuracy(const QuantizedModel& model, const Dataset& ds) {
  int correct = 0;
  for (int i = 0; i < ds.count(); ++i) {
    VectorD nat = ds.images.row(i).cast<double>().transpose();
    if (classify(model, nat) == ds.labels[i]) ++correct;
  }
  return double(correct) / ds.count();
}

}  // namespace

TrainedVictim train_victim(const Dataset& train_set, const Dataset& test_set,
                           const VictimArch& arch, std::uint64_t seed) {
  if (train_set.count() < 1) throw DataError("empty training set");
  for (int label : train_set.labels) {
    if (label < 0 || label >= arch.num_classes) {
      throw DataError("label " + std::to_string(label) + " outside [0," +
                      std::to_string(arch.num_classes) + ")");
    }
  }

  RowMatrix<double> x(train_set.count(), train_set.pixels());
  for (int i = 0; i < train_set.count(); ++i) {
    VectorD nat = train_set.images.row(i).cast<double>().transpose();
    x.row(i) = normalize_input_native(nat).transpose();
  }

  TrainedVictim victim;
  victim.seed = seed;
  victim.shadow = Mlp<double>::make(train_set.pixels(), arch.hidden, arch.num_classes, seed);
  TrainOptions opts = arch.train;
  opts.seed = seed;
  train_softmax_ce(victim.shadow, x, train_set.labels, opts);

  victim.train_accuracy = float_accuracy(victim.shadow, train_set);
  victim.quantized = quantize_model(victim.shadow, train_set.images);
  victim.test_accuracy = float_accuracy(victim.shadow, test_set);
  victim.quantized_test_accuracy = quantized_accuracy(victim.quantized, test_set);
  return victim;
}

}  // namespace ll::qnn
