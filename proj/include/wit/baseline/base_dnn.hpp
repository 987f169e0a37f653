#pragma once

#include <cstddef>
#include <span>

#include "wit/model/localizer.hpp"

namespace wit::baseline {

inline constexpr std::size_t kHiddenLayers = 4;

/// Plain MLP on the flattened raw features: four (linear, ReLU, dropout)
/// layers of width D, then a linear map to D'.
class BaseDnn final : public model::Localizer {
 public:
  BaseDnn(const model::ModelConfig& cfg, Rng& init_rng);

  num::Var forward(num::Graph& g, std::span<const num::Var> params, num::Var features, Rng& rng,
                   bool training) const override;

  std::size_t input_width() const { return config_.subcarriers * config_.feature_width; }
};

/// Exact learnable scalar count.
std::size_t param_count(const model::ParameterSet& params);

}  // namespace wit::baseline
