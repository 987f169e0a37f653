#include "wit/training/fit.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>

#include "wit/baseline/base_dnn.hpp"
#include "wit/model/wit.hpp"
#include "wit/numcore/ops.hpp"
#include "wit/random.hpp"
#include "wit/training/metrics.hpp"

namespace wit::train {

std::unique_ptr<model::Localizer> make_model(const model::ModelConfig& cfg, std::uint64_t seed) {
  Rng rng = substream(seed, Stream::kInit);
  if (cfg.kind == model::ModelKind::kBase) return std::make_unique<baseline::BaseDnn>(cfg, rng);
  return std::make_unique<model::WitModel>(cfg, rng);
}

std::unique_ptr<model::Localizer> from_checkpoint(const model::Checkpoint& ckpt) {
  auto m = make_model(ckpt.config, 0);
  auto& params = m->params();
  if (params.size() != ckpt.params.size()) throw FormatError("checkpoint parameter count does not match the model");
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto j = ckpt.params.find(params.name(i));
    if (!j) throw FormatError("checkpoint lacks parameter " + params.name(i));
    if (ckpt.params.value(*j).shape() != params.value(i).shape()) {
      throw FormatError("checkpoint parameter " + params.name(i) + " has the wrong shape");
    }
    params.value(i) = ckpt.params.value(*j);
  }
  return m;
}

num::Var mse_loss(num::Var predicted, num::Var target) {
  const auto& p = predicted.graph->value(predicted);
  if (p.rank() == 0 || p.dim(0) == 0) throw UsageError("mse_loss on an empty batch");
  return num::scale(num::sum(num::square(num::sub(predicted, target))), 1.0 / static_cast<double>(p.dim(0)));
}

num::Tensor predict(const model::Localizer& model, const data::Dataset& ds, std::span<const std::uint64_t> idx,
                    std::size_t batch) {
  num::Tensor out({idx.size(), model.config().outputs});
  Rng unused = substream(0, Stream::kDropout);
  for (std::size_t start = 0; start < idx.size(); start += batch) {
    const auto chunk = idx.subspan(start, std::min(batch, idx.size() - start));
    num::Graph g;
    const auto params = model::bind(g, model.params(), false);
    const num::Var x = g.input(ds.feature_batch(chunk));
    const auto& y = g.value(model.forward(g, params, x, unused, false));
    std::copy(y.data().begin(), y.data().end(), out.ptr() + start * model.config().outputs);
  }
  return out;
}

double evaluate_mae(const model::Localizer& model, const data::Dataset& ds, std::span<const std::uint64_t> idx) {
  return mae(predict(model, ds, idx), ds.label_batch(idx), ds.bounds);
}

FitResult fit(model::Localizer& model, const data::Dataset& ds, const TrainConfig& cfg, std::ostream* log) {
  if (cfg.batch == 0) throw ConfigError("batch size must be at least 1");
  std::vector<std::uint64_t> train = ds.split.train;
  if (train.empty()) throw UsageError("fit needs a train split");
  std::vector<std::uint64_t> val = ds.split.validation();
  if (val.empty()) val = train;

  auto& params = model.params().values();
  OptimState opt = make_optim_state(params, cfg.adam);
  FitResult result;
  result.best_val_mae_m = std::numeric_limits<double>::infinity();
  std::vector<num::Tensor> best = params;
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng shuffle = substream(cfg.seed, Stream::kShuffle, {epoch});
    Rng drop = substream(cfg.seed, Stream::kDropout, {epoch});
    std::shuffle(train.begin(), train.end(), shuffle);

    double loss_sum = 0.0;
    double val_mae = 0.0;
    try {
      for (std::size_t start = 0; start < train.size(); start += cfg.batch) {
        const auto chunk = std::span<const std::uint64_t>(train).subspan(start, std::min(cfg.batch, train.size() - start));
        num::Graph g;
        const auto vars = model::bind(g, model.params(), true);
        const num::Var x = g.input(ds.feature_batch(chunk));
        const num::Var y = g.input(ds.label_batch(chunk));
        const num::Var loss = mse_loss(model.forward(g, vars, x, drop, true), y);
        g.backward(loss);
        std::vector<num::Tensor> grads;
        grads.reserve(vars.size());
        for (const auto& v : vars) grads.push_back(g.grad(v));
        adamw_step(params, grads, opt);
        loss_sum += g.value(loss).item() * static_cast<double>(chunk.size());
        ++result.steps;
      }
      val_mae = evaluate_mae(model, ds, val);
    } catch (const EvaluationError& e) {
      throw DivergenceError(std::string("training diverged in epoch ") + std::to_string(epoch) + ": " + e.what(),
                            result.history);
    }

    EpochRecord rec{epoch, loss_sum / static_cast<double>(train.size()), val_mae};
    result.history.push_back(rec);
    if (log) {
      *log << "epoch " << epoch << " loss " << rec.train_loss << " val_mae_m " << rec.val_mae_m << '\n';
    }
    if (rec.val_mae_m < result.best_val_mae_m) {
      result.best_val_mae_m = rec.val_mae_m;
      result.best_epoch = epoch;
      best = params;
      since_best = 0;
    } else if (cfg.patience > 0 && ++since_best >= cfg.patience) {
      result.stopped_early = true;
      break;
    }
  }
  if (result.best_epoch > 0) params = best;
  return result;
}

void write_history(std::ostream& os, const std::vector<EpochRecord>& history) {
  os << "# epoch, train_loss, val_mae_m\n" << std::setprecision(17);
  for (const auto& r : history) os << r.epoch << ", " << r.train_loss << ", " << r.val_mae_m << '\n';
}

model::Checkpoint make_checkpoint(const model::Localizer& model, const FitResult& result) {
  return {model.config(), model.params(), result.best_epoch, result.best_val_mae_m};
}

}  // namespace wit::train
