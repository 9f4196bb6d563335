// Bias-corrected adaptive-moment optimizer over MlpParams.

#pragma once

#include "choice/numerics/mlp.hpp"

namespace choice::num {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamConfig config;
  long step = 0;
  MlpGrads m;  // first moment, shapes mirror the parameters
  MlpGrads v;  // second moment
};

AdamState make_adam(const MlpParams& params, AdamConfig config = {});

// In-place update. Throws NumericalError naming the offending tensor if any
// gradient entry is non-finite.
void adam_step(AdamState& state, MlpParams& params, const MlpGrads& grads);

}  // namespace choice::num
