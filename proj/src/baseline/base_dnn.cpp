#include "wit/baseline/base_dnn.hpp"

#include <string>

#include "wit/errors.hpp"
#include "wit/numcore/ops.hpp"

namespace wit::baseline {

BaseDnn::BaseDnn(const model::ModelConfig& cfg, Rng& rng) : Localizer(cfg) {
  config_.kind = model::ModelKind::kBase;
  if (input_width() == 0 || cfg.dim == 0) throw ConfigError("base-DNN needs nonzero input and hidden width");
  std::size_t fan_in = input_width();
  for (std::size_t l = 0; l < kHiddenLayers; ++l) {
    const std::string pre = "layer" + std::to_string(l) + ".";
    params_.add(pre + "w", model::init_uniform(fan_in, cfg.dim, rng));
    params_.add(pre + "b", num::Tensor({cfg.dim}));
    fan_in = cfg.dim;
  }
  params_.add("out.w", model::init_uniform(cfg.dim, cfg.outputs, rng));
  params_.add("out.b", num::Tensor({cfg.outputs}));
}

num::Var BaseDnn::forward(num::Graph& g, std::span<const num::Var> p, num::Var features, Rng& rng,
                          bool training) const {
  const auto& x = g.value(features);
  if (x.rank() < 2 || x.size() % input_width() != 0 || x.size() / x.dim(0) != input_width()) {
    throw DimensionError("base-DNN expects " + std::to_string(input_width()) + " features per sample, got " +
                         num::shape_string(x.shape()));
  }
  if (p.size() != params_.size()) throw UsageError("parameter binding does not match the model");
  num::Var h = num::reshape(features, {x.dim(0), input_width()});
  for (std::size_t l = 0; l < kHiddenLayers; ++l) {
    h = num::relu(model::linear(h, p[2 * l], p[2 * l + 1]));
    h = num::dropout(h, config_.base_dropout, rng, training);
  }
  return model::linear(h, p[2 * kHiddenLayers], p[2 * kHiddenLayers + 1]);
}

std::size_t param_count(const model::ParameterSet& params) { return params.scalar_count(); }

}  // namespace wit::baseline
