#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wit/numcore/graph.hpp"
#include "wit/numcore/tensor.hpp"
#include "wit/random.hpp"

namespace wit::model {

/// Named learnable tensors in registration order.
class ParameterSet {
 public:
  std::size_t add(std::string name, num::Tensor value);

  std::size_t size() const { return values_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  num::Tensor& value(std::size_t i) { return values_.at(i); }
  const num::Tensor& value(std::size_t i) const { return values_.at(i); }
  std::vector<num::Tensor>& values() { return values_; }
  const std::vector<num::Tensor>& values() const { return values_; }
  std::optional<std::size_t> find(const std::string& name) const;
  std::size_t index(const std::string& name) const;  // throws if absent

  /// Number of learnable scalars.
  std::size_t scalar_count() const;

 private:
  std::vector<std::string> names_;
  std::vector<num::Tensor> values_;
};

/// Places every parameter on the graph, as gradient leaves when trainable and
/// as constants otherwise.
std::vector<num::Var> bind(num::Graph& g, const ParameterSet& params, bool trainable);

/// uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for a [fan_in, fan_out] matrix.
num::Tensor init_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng);
num::Tensor init_normal(num::Shape shape, double stddev, Rng& rng);

/// x W + b over the last axis.
num::Var linear(num::Var x, num::Var w, num::Var b);

}  // namespace wit::model
