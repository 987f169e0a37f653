#include "wit/training/optim.hpp"

#include <cmath>

#include "wit/errors.hpp"

namespace wit::train {

OptimState make_optim_state(const std::vector<num::Tensor>& params, const AdamConfig& cfg) {
  OptimState s;
  s.cfg = cfg;
  for (const auto& p : params) {
    s.m.emplace_back(p.shape());
    s.v.emplace_back(p.shape());
  }
  return s;
}

void adamw_step(std::vector<num::Tensor>& params, const std::vector<num::Tensor>& grads, OptimState& state) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    throw UsageError("adamw_step: parameter, gradient and state counts differ");
  }
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (grads[i].shape() != params[i].shape()) throw DimensionError("adamw_step: gradient shape mismatch");
    if (!grads[i].all_finite()) {
      throw EvaluationError("adamw_step: non-finite gradient for parameter " + std::to_string(i) + ", step rejected");
    }
  }
  const AdamConfig& c = state.cfg;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(c.beta1, t);
  const double bc2 = 1.0 - std::pow(c.beta2, t);
  const double decay = 1.0 - c.lr * c.weight_decay;
  for (std::size_t i = 0; i < params.size(); ++i) {
    double* p = params[i].ptr();
    double* m = state.m[i].ptr();
    double* v = state.v[i].ptr();
    const double* g = grads[i].ptr();
    for (std::size_t j = 0; j < params[i].size(); ++j) {
      m[j] = c.beta1 * m[j] + (1.0 - c.beta1) * g[j];
      v[j] = c.beta2 * v[j] + (1.0 - c.beta2) * g[j] * g[j];
      const double mhat = m[j] / bc1;
      const double vhat = v[j] / bc2;
      p[j] *= decay;
      p[j] -= c.lr * mhat / (std::sqrt(vhat) + c.eps);
    }
  }
}

}  // namespace wit::train
