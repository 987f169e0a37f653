#pragma once

#include <functional>
#include <span>
#include <vector>

#include "wit/numcore/graph.hpp"

namespace wit::num {

/// Builds a scalar from parameter variables on the given graph.
using ScalarFn = std::function<Var(Graph&, std::span<const Var>)>;

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::size_t worst_param = 0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

/// Compares reverse-mode gradients against central differences with the
/// given step. The relative error of one entry is
/// |analytic - fd| / max(|analytic|, |fd|, 1e-12).
GradCheckReport grad_check_report(const ScalarFn& f, std::vector<Tensor> params, double step = 1e-5);

/// Max relative error over all parameter entries.
double grad_check(const ScalarFn& f, std::vector<Tensor> params, double step = 1e-5);

}  // namespace wit::num
