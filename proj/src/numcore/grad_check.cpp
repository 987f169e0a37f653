#include "wit/numcore/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "wit/errors.hpp"

namespace wit::num {
namespace {

double evaluate(const ScalarFn& f, const std::vector<Tensor>& params) {
  Graph g;
  std::vector<Var> vars;
  vars.reserve(params.size());
  for (const auto& p : params) vars.push_back(g.input(p));
  const double v = g.value(f(g, vars)).item();
  if (!std::isfinite(v)) throw EvaluationError("grad_check: function value is not finite");
  return v;
}

}  // namespace

GradCheckReport grad_check_report(const ScalarFn& f, std::vector<Tensor> params, double step) {
  std::vector<Tensor> analytic;
  {
    Graph g;
    std::vector<Var> vars;
    for (const auto& p : params) vars.push_back(g.param(p));
    Var out = f(g, vars);
    if (!std::isfinite(g.value(out).item())) throw EvaluationError("grad_check: function value is not finite");
    g.backward(out);
    for (const Var& v : vars) analytic.push_back(g.grad(v));
  }

  GradCheckReport report;
  for (std::size_t p = 0; p < params.size(); ++p) {
    for (std::size_t i = 0; i < params[p].size(); ++i) {
      const double saved = params[p][i];
      params[p][i] = saved + step;
      const double up = evaluate(f, params);
      params[p][i] = saved - step;
      const double down = evaluate(f, params);
      params[p][i] = saved;
      const double fd = (up - down) / (2.0 * step);
      const double an = analytic[p][i];
      const double rel = std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1e-12});
      if (rel > report.max_rel_error) report = {rel, p, i, an, fd};
    }
  }
  return report;
}

double grad_check(const ScalarFn& f, std::vector<Tensor> params, double step) {
  return grad_check_report(f, std::move(params), step).max_rel_error;
}

}  // namespace wit::num
