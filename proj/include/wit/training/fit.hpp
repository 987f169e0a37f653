#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <span>
#include <vector>

#include "wit/dataset/dataset.hpp"
#include "wit/errors.hpp"
#include "wit/model/checkpoint.hpp"
#include "wit/model/localizer.hpp"
#include "wit/numcore/graph.hpp"
#include "wit/training/optim.hpp"

namespace wit::train {

/// Fresh localizer of the configured kind, initialized from `seed`.
std::unique_ptr<model::Localizer> make_model(const model::ModelConfig& cfg, std::uint64_t seed);
std::unique_ptr<model::Localizer> from_checkpoint(const model::Checkpoint& ckpt);

/// Mean over the batch of the squared Euclidean error.
num::Var mse_loss(num::Var predicted, num::Var target);

struct TrainConfig {
  std::size_t epochs = 300;
  std::size_t batch = 512;
  std::size_t patience = 0;  // 0 disables early stopping
  std::uint64_t seed = 1;
  AdamConfig adam;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_mae_m = 0.0;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct FitResult {
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  double best_val_mae_m = 0.0;
  std::uint64_t steps = 0;
  bool stopped_early = false;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::vector<EpochRecord> history)
      : Error(what), history_(std::move(history)) {}
  const std::vector<EpochRecord>& history() const { return history_; }

 private:
  std::vector<EpochRecord> history_;
};

/// Seeded mini-batch AdamW on the train split, validating after every epoch.
/// On return the model holds the parameters of the best validation epoch.
FitResult fit(model::Localizer& model, const data::Dataset& ds, const TrainConfig& cfg,
              std::ostream* log = nullptr);

/// Eval-mode predictions [n, 2] for the given samples.
num::Tensor predict(const model::Localizer& model, const data::Dataset& ds, std::span<const std::uint64_t> idx,
                    std::size_t batch = 256);

/// Eval-mode MAE in meters on the given samples.
double evaluate_mae(const model::Localizer& model, const data::Dataset& ds, std::span<const std::uint64_t> idx);

void write_history(std::ostream& os, const std::vector<EpochRecord>& history);

model::Checkpoint make_checkpoint(const model::Localizer& model, const FitResult& result);

}  // namespace wit::train
