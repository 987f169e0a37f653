#include "wit/model/localizer.hpp"

#include "wit/errors.hpp"

namespace wit::model {

const char* to_string(ModelKind kind) { return kind == ModelKind::kWit ? "wit" : "base"; }

const char* to_string(Pooling pooling) { return pooling == Pooling::kAverage ? "avg" : "lid"; }

ModelKind parse_model_kind(const std::string& s) {
  if (s == "wit") return ModelKind::kWit;
  if (s == "base") return ModelKind::kBase;
  throw UsageError("unknown model kind '" + s + "' (expected wit or base)");
}

Pooling parse_pooling(const std::string& s) {
  if (s == "avg") return Pooling::kAverage;
  if (s == "lid") return Pooling::kLid;
  throw UsageError("unknown pooling '" + s + "' (expected avg or lid)");
}

std::string Localizer::label() const {
  if (config_.kind == ModelKind::kBase) return "Base-DNN";
  return config_.pooling == Pooling::kLid ? "WiT [LID]" : "WiT (avg.)";
}

}  // namespace wit::model
