#pragma once

#include "ll/digits.hpp"
#include "ll/model.hpp"

namespace ll::qnn {

struct VictimArch {
  std::vector<int> hidden{32};  // 64 -> 32 -> 10 reference victim
  int num_classes = 10;
  TrainOptions train;
};

VictimArch default_victim_arch();

// Float training (Adam) followed by post-training quantization of all
// weights. Deterministic given the seed; accuracy is measured on a held-out
// split and reported whether or not it converged.
TrainedVictim train_victim(const Dataset& train_set, const Dataset& test_set,
                           const VictimArch& arch, std::uint64_t seed);

}  // namespace ll::qnn
