#pragma once

#include <cstddef>

#include "wit/numcore/graph.hpp"
#include "wit/random.hpp"

namespace wit::num {

inline constexpr double kLayerNormEps = 1e-5;

/// A[..., k] x B[k, n] -> [..., n]. Leading axes of A are folded into rows,
/// so a 2-D A is the plain matrix product.
Var matmul(Var a, Var b);

/// Batched products over the leading axis: [b,m,k] x [b,k,n] -> [b,m,n] and
/// [b,m,k] x [b,n,k]^T -> [b,m,n].
Var bmm(Var a, Var b);
Var bmm_nt(Var a, Var b);

Var add(Var a, Var b);
Var sub(Var a, Var b);
/// a + b where b's shape is a suffix of a's shape (bias rows, position tables).
Var add_broadcast(Var a, Var b);
Var scale(Var a, double s);
/// a * s and a + s for a learnable one-element s.
Var mul_scalar(Var a, Var s);
Var add_scalar(Var a, Var s);
Var square(Var a);
Var sum(Var a);
Var reshape(Var a, Shape shape);

Var relu(Var a);
/// Inverted dropout: survivors are scaled by 1/(1-rate) while training, the
/// identity otherwise.
Var dropout(Var a, double rate, Rng& rng, bool training);

/// Softmax over the last axis with per-row max subtraction.
Var softmax_rows(Var a);

/// gamma * (x - mean) / sqrt(var + eps) + beta over the last axis.
Var layer_norm(Var x, double gamma, double beta, double eps = kLayerNormEps);

/// [b,n,d] with a [d] or [1,d] row -> [b,n+1,d], the row placed first.
Var prepend_row(Var x, Var row);
/// Mean over axis 1 of [b,n,d] for rows first..n-1 -> [b,d].
Var mean_rows(Var x, std::size_t first = 0);
/// Row idx of each batch entry of [b,n,d] -> [b,d].
Var select_row(Var x, std::size_t idx);

}  // namespace wit::num
