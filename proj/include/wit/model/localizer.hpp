#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "wit/model/params.hpp"
#include "wit/numcore/graph.hpp"
#include "wit/random.hpp"

namespace wit::model {

enum class ModelKind { kWit = 0, kBase = 1 };
enum class Pooling { kAverage = 0, kLid = 1 };

const char* to_string(ModelKind kind);
const char* to_string(Pooling pooling);
ModelKind parse_model_kind(const std::string& s);  // "wit" | "base"
Pooling parse_pooling(const std::string& s);       // "avg" | "lid"

/// Architecture description shared by both localizers; fields that do not
/// apply to a kind are ignored by it.
struct ModelConfig {
  ModelKind kind = ModelKind::kWit;
  std::size_t subcarriers = 0;    // N_c'
  std::size_t feature_width = 0;  // 3 N_r
  std::size_t dim = 64;           // D
  std::size_t outputs = 2;        // D'
  std::size_t blocks = 1;
  Pooling pooling = Pooling::kAverage;
  double dropout = 0.1;
  double base_dropout = 0.2;
  double ln_gamma = 1.0;
  double ln_beta = 1e-4;
  bool ln_learned = false;
  bool residual = true;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// A network mapping [B, N_c', 3N_r] features to [B, D'] scaled positions.
class Localizer {
 public:
  virtual ~Localizer() = default;

  virtual num::Var forward(num::Graph& g, std::span<const num::Var> params, num::Var features, Rng& rng,
                           bool training) const = 0;

  const ModelConfig& config() const { return config_; }
  ParameterSet& params() { return params_; }
  const ParameterSet& params() const { return params_; }
  /// Display name used in reports, e.g. "WiT (avg.)".
  std::string label() const;

 protected:
  explicit Localizer(ModelConfig cfg) : config_(cfg) {}
  ModelConfig config_;
  ParameterSet params_;
};

}  // namespace wit::model
