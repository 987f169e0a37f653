#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wit/model/localizer.hpp"
#include "wit/numcore/graph.hpp"

namespace wit::model {

/// LayerNorm with either fixed (gamma, beta) or learnable scalar ones.
struct NormSpec {
  double gamma = 1.0;
  double beta = 1e-4;
  std::optional<num::Var> learned_gamma;
  std::optional<num::Var> learned_beta;
};

num::Var apply_norm(num::Var x, const NormSpec& norm);

/// e_i = h_i E for every subcarrier row.
num::Var embed(num::Var features, num::Var embedding);
/// e_i + g_i, the positional table broadcast over the batch.
num::Var add_positional(num::Var embedded, num::Var positional);
/// [LID] row e0 placed before the subcarrier rows: C = N_c' + 1.
num::Var prepend_lid(num::Var embedded, num::Var lid);

struct AttentionResult {
  num::Var output;   // o, [B, C, D]
  num::Var normed;   // e-bar
  num::Var values;   // e-bar W
  num::Var scores;   // alpha before the softmax, [B, C, C]
  num::Var weights;  // softmax of scores
};

/// Single-head self-attention with W_q = W_k = W_v = W over LayerNorm'd rows.
AttentionResult attention(num::Var input, num::Var w, const NormSpec& norm);

struct BlockParams {
  num::Var attn;
  num::Var mlp_w1, mlp_b1, mlp_w2, mlp_b2;
  NormSpec norm_in;
  NormSpec norm_out;
};

/// o-bar_i = MLP1(LayerNorm(o_i + e-hat_i)) + (o_i + e-hat_i). With
/// residual off, both skip paths are dropped: o-bar_i = MLP1(LayerNorm(o_i)).
num::Var transformer_block(num::Var input, const BlockParams& p, double dropout, bool residual, Rng& rng,
                           bool training);

/// AVERAGE: mean of the subcarrier rows (row 0 skipped when it holds the
/// LID token). LID: row 0.
num::Var pool(num::Var x, Pooling mode, bool has_lid);

struct HeadParams {
  num::Var w, b;          // MLP2
  num::Var out_w, out_b;  // W2 and its bias
};

/// relu(v M2 + b2) W2 + b_out.
num::Var head(num::Var pooled, const HeadParams& p, double dropout, Rng& rng, bool training);

/// Attention-based localizer: embedding, positional table, optional LID
/// token, transformer blocks, pooling and MLP head.
class WitModel final : public Localizer {
 public:
  WitModel(const ModelConfig& cfg, Rng& init_rng);

  num::Var forward(num::Graph& g, std::span<const num::Var> params, num::Var features, Rng& rng,
                   bool training) const override;

  /// Index of the named parameter ("embedding", "positional", "lid",
  /// "block0.attn", ...).
  std::size_t param(const std::string& name) const { return params_.index(name); }

 private:
  BlockParams block_params(std::span<const num::Var> params, std::size_t b) const;
};

}  // namespace wit::model
