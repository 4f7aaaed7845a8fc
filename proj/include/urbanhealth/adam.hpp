#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "urbanhealth/matrix.hpp"

namespace urbanhealth {

// Adam with bias correction and decoupled weight decay. Moment buffers are
// created on the first step to match the parameter shapes; the step counter
// only moves forward.
struct AdamState {
  double learning_rate = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.0;
  std::uint64_t step = 0;
  std::vector<Matrix> m;
  std::vector<Matrix> v;
};

void adam_step(AdamState& state, std::span<Matrix> params, std::span<const Matrix> grads);

}  // namespace urbanhealth
