#include "wit/model/wit.hpp"

#include <cmath>
#include <string>

#include "wit/errors.hpp"
#include "wit/numcore/ops.hpp"

namespace wit::model {

using num::Var;

Var apply_norm(Var x, const NormSpec& norm) {
  if (norm.learned_gamma && norm.learned_beta) {
    return num::add_scalar(num::mul_scalar(num::layer_norm(x, 1.0, 0.0), *norm.learned_gamma), *norm.learned_beta);
  }
  return num::layer_norm(x, norm.gamma, norm.beta);
}

Var embed(Var features, Var embedding) { return num::matmul(features, embedding); }

Var add_positional(Var embedded, Var positional) {
  const auto& e = embedded.graph->value(embedded);
  const auto& g = positional.graph->value(positional);
  if (e.rank() < 2 || g.rank() != 2 || e.dim(e.rank() - 2) != g.dim(0) || e.cols() != g.dim(1)) {
    throw DimensionError("add_positional: table " + num::shape_string(g.shape()) + " does not match " +
                         num::shape_string(e.shape()));
  }
  return num::add_broadcast(embedded, positional);
}

Var prepend_lid(Var embedded, Var lid) { return num::prepend_row(embedded, lid); }

AttentionResult attention(Var input, Var w, const NormSpec& norm) {
  const auto& x = input.graph->value(input);
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(x.cols()));
  AttentionResult r;
  r.normed = apply_norm(input, norm);
  r.values = num::matmul(r.normed, w);
  r.scores = num::scale(num::bmm_nt(r.values, r.values), inv_sqrt_d);
  r.weights = num::softmax_rows(r.scores);
  r.output = num::bmm(r.weights, r.values);
  return r;
}

Var transformer_block(Var input, const BlockParams& p, double dropout, bool residual, Rng& rng, bool training) {
  const Var o = attention(input, p.attn, p.norm_in).output;
  const Var skip = residual ? num::add(o, input) : o;
  const Var normed = apply_norm(skip, p.norm_out);
  Var hidden = num::relu(linear(normed, p.mlp_w1, p.mlp_b1));
  hidden = num::dropout(hidden, dropout, rng, training);
  const Var mlp = linear(hidden, p.mlp_w2, p.mlp_b2);
  return residual ? num::add(mlp, skip) : mlp;
}

Var pool(Var x, Pooling mode, bool has_lid) {
  if (mode == Pooling::kLid) {
    if (!has_lid) throw DimensionError("LID pooling needs the LID row");
    return num::select_row(x, 0);
  }
  return num::mean_rows(x, has_lid ? 1 : 0);
}

Var head(Var pooled, const HeadParams& p, double dropout, Rng& rng, bool training) {
  Var hidden = num::relu(linear(pooled, p.w, p.b));
  hidden = num::dropout(hidden, dropout, rng, training);
  return linear(hidden, p.out_w, p.out_b);
}

WitModel::WitModel(const ModelConfig& cfg, Rng& rng) : Localizer(cfg) {
  const std::size_t d = cfg.dim;
  if (cfg.subcarriers == 0 || cfg.feature_width == 0 || d < 2) throw ConfigError("WiT needs N_c' > 0, 3N_r > 0, D >= 2");
  if (cfg.blocks == 0) throw ConfigError("WiT needs at least one block");
  params_.add("embedding", init_uniform(cfg.feature_width, d, rng));
  params_.add("positional", init_normal({cfg.subcarriers, d}, 0.02, rng));
  if (cfg.pooling == Pooling::kLid) params_.add("lid", init_normal({1, d}, 0.02, rng));
  for (std::size_t b = 0; b < cfg.blocks; ++b) {
    const std::string pre = "block" + std::to_string(b) + ".";
    params_.add(pre + "attn", init_uniform(d, d, rng));
    params_.add(pre + "mlp.w1", init_uniform(d, d, rng));
    params_.add(pre + "mlp.b1", num::Tensor({d}));
    params_.add(pre + "mlp.w2", init_uniform(d, d, rng));
    params_.add(pre + "mlp.b2", num::Tensor({d}));
    if (cfg.ln_learned) {
      params_.add(pre + "ln_in.gamma", num::Tensor::scalar(cfg.ln_gamma));
      params_.add(pre + "ln_in.beta", num::Tensor::scalar(cfg.ln_beta));
      params_.add(pre + "ln_out.gamma", num::Tensor::scalar(cfg.ln_gamma));
      params_.add(pre + "ln_out.beta", num::Tensor::scalar(cfg.ln_beta));
    }
  }
  params_.add("head.w", init_uniform(d, d, rng));
  params_.add("head.b", num::Tensor({d}));
  params_.add("head.out_w", init_uniform(d, cfg.outputs, rng));
  params_.add("head.out_b", num::Tensor({cfg.outputs}));
}

BlockParams WitModel::block_params(std::span<const Var> p, std::size_t b) const {
  const std::string pre = "block" + std::to_string(b) + ".";
  BlockParams bp{p[param(pre + "attn")],   p[param(pre + "mlp.w1")], p[param(pre + "mlp.b1")],
                 p[param(pre + "mlp.w2")], p[param(pre + "mlp.b2")], {}, {}};
  for (NormSpec* n : {&bp.norm_in, &bp.norm_out}) {
    n->gamma = config_.ln_gamma;
    n->beta = config_.ln_beta;
  }
  if (config_.ln_learned) {
    bp.norm_in.learned_gamma = p[param(pre + "ln_in.gamma")];
    bp.norm_in.learned_beta = p[param(pre + "ln_in.beta")];
    bp.norm_out.learned_gamma = p[param(pre + "ln_out.gamma")];
    bp.norm_out.learned_beta = p[param(pre + "ln_out.beta")];
  }
  return bp;
}

Var WitModel::forward(num::Graph& g, std::span<const Var> p, Var features, Rng& rng, bool training) const {
  const auto& x = g.value(features);
  if (x.rank() != 3 || x.dim(1) != config_.subcarriers || x.dim(2) != config_.feature_width) {
    throw DimensionError("WiT expects [B, " + std::to_string(config_.subcarriers) + ", " +
                         std::to_string(config_.feature_width) + "] features, got " + num::shape_string(x.shape()));
  }
  if (p.size() != params_.size()) throw UsageError("parameter binding does not match the model");
  Var h = add_positional(embed(features, p[param("embedding")]), p[param("positional")]);
  const bool has_lid = config_.pooling == Pooling::kLid;
  if (has_lid) h = prepend_lid(h, p[param("lid")]);
  for (std::size_t b = 0; b < config_.blocks; ++b) {
    h = transformer_block(h, block_params(p, b), config_.dropout, config_.residual, rng, training);
  }
  const Var pooled = pool(h, config_.pooling, has_lid);
  const HeadParams hp{p[param("head.w")], p[param("head.b")], p[param("head.out_w")], p[param("head.out_b")]};
  return head(pooled, hp, config_.dropout, rng, training);
}

}  // namespace wit::model
