#pragma once

#include <cstdint>
#include <vector>

#include "wit/numcore/tensor.hpp"

namespace wit::train {

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-4;  // decoupled
};

struct OptimState {
  AdamConfig cfg;
  std::vector<num::Tensor> m;
  std::vector<num::Tensor> v;
  std::uint64_t step = 0;
};

/// Zero moments shaped like the parameters.
OptimState make_optim_state(const std::vector<num::Tensor>& params, const AdamConfig& cfg);

/// One AdamW update: theta <- theta (1 - lr wd), then the bias-corrected Adam
/// step. A non-finite gradient rejects the step without touching anything.
void adamw_step(std::vector<num::Tensor>& params, const std::vector<num::Tensor>& grads, OptimState& state);

}  // namespace wit::train
