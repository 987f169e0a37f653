#include "wit/model/params.hpp"

#include <cmath>

#include "wit/errors.hpp"
#include "wit/numcore/ops.hpp"

namespace wit::model {

std::size_t ParameterSet::add(std::string name, num::Tensor value) {
  if (find(name)) throw UsageError("duplicate parameter " + name);
  names_.push_back(std::move(name));
  values_.push_back(std::move(value));
  return values_.size() - 1;
}

std::optional<std::size_t> ParameterSet::find(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t ParameterSet::index(const std::string& name) const {
  if (auto i = find(name)) return *i;
  throw UsageError("no parameter named " + name);
}

std::size_t ParameterSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& v : values_) n += v.size();
  return n;
}

std::vector<num::Var> bind(num::Graph& g, const ParameterSet& params, bool trainable) {
  std::vector<num::Var> vars;
  vars.reserve(params.size());
  for (const auto& v : params.values()) vars.push_back(trainable ? g.param(v) : g.input(v));
  return vars;
}

num::Tensor init_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::uniform_real_distribution<double> u(-bound, bound);
  num::Tensor t({fan_in, fan_out});
  for (double& v : t.data()) v = u(rng);
  return t;
}

num::Tensor init_normal(num::Shape shape, double stddev, Rng& rng) {
  std::normal_distribution<double> n(0.0, stddev);
  num::Tensor t(std::move(shape));
  for (double& v : t.data()) v = n(rng);
  return t;
}

num::Var linear(num::Var x, num::Var w, num::Var b) { return num::add_broadcast(num::matmul(x, w), b); }

}  // namespace wit::model
