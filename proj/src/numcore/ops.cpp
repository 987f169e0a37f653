#include "wit/numcore/ops.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "wit/errors.hpp"
#include "wit/numcore/kernels.hpp"

namespace wit::num {
namespace {

using kernels::Trans;

Graph& graph_of(Var a) {
  if (a.graph == nullptr) throw UsageError("variable is not attached to a graph");
  return *a.graph;
}

Graph& graph_of(Var a, Var b) {
  if (a.graph != b.graph) throw UsageError("operands belong to different graphs");
  return graph_of(a);
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shapes " + shape_string(a.shape()) + " and " +
                         shape_string(b.shape()) + " differ");
  }
}

void require_rank(const Tensor& a, std::size_t rank, const char* op) {
  if (a.rank() != rank) {
    throw DimensionError(std::string(op) + ": expected rank " + std::to_string(rank) + ", got " +
                         shape_string(a.shape()));
  }
}

void axpy(Tensor& dst, const Tensor& src, double s = 1.0) {
  double* d = dst.ptr();
  const double* x = src.ptr();
  for (std::size_t i = 0; i < dst.size(); ++i) d[i] += s * x[i];
}

}  // namespace

Var matmul(Var a, Var b) {
  Graph& g = graph_of(a, b);
  const Tensor& A = g.value(a);
  const Tensor& B = g.value(b);
  if (A.rank() < 2 || B.rank() != 2 || A.cols() != B.dim(0)) {
    throw DimensionError("matmul: cannot multiply " + shape_string(A.shape()) + " by " +
                         shape_string(B.shape()));
  }
  const std::size_t m = A.rows(), k = A.cols(), n = B.dim(1);
  Shape out_shape = A.shape();
  out_shape.back() = n;
  Tensor C(out_shape);
  kernels::gemm(Trans::kNo, Trans::kNo, m, n, k, A.ptr(), B.ptr(), C.ptr(), false);
  return g.record(std::move(C), {a, b}, [m, n, k](BackwardContext& ctx) {
    const Tensor& dC = ctx.output_grad();
    if (Tensor* dA = ctx.input_grad(0)) {
      kernels::gemm(Trans::kNo, Trans::kYes, m, k, n, dC.ptr(), ctx.input(1).ptr(), dA->ptr(), true);
    }
    if (Tensor* dB = ctx.input_grad(1)) {
      kernels::gemm(Trans::kYes, Trans::kNo, k, n, m, ctx.input(0).ptr(), dC.ptr(), dB->ptr(), true);
    }
  });
}

Var bmm(Var a, Var b) {
  Graph& g = graph_of(a, b);
  const Tensor& A = g.value(a);
  const Tensor& B = g.value(b);
  require_rank(A, 3, "bmm");
  require_rank(B, 3, "bmm");
  if (A.dim(0) != B.dim(0) || A.dim(2) != B.dim(1)) {
    throw DimensionError("bmm: cannot multiply " + shape_string(A.shape()) + " by " +
                         shape_string(B.shape()));
  }
  const std::size_t batch = A.dim(0), m = A.dim(1), k = A.dim(2), n = B.dim(2);
  Tensor C({batch, m, n});
  for (std::size_t s = 0; s < batch; ++s) {
    kernels::gemm(Trans::kNo, Trans::kNo, m, n, k, A.ptr() + s * m * k, B.ptr() + s * k * n,
                  C.ptr() + s * m * n, false);
  }
  return g.record(std::move(C), {a, b}, [batch, m, n, k](BackwardContext& ctx) {
    const Tensor& dC = ctx.output_grad();
    const Tensor& A = ctx.input(0);
    const Tensor& B = ctx.input(1);
    Tensor* dA = ctx.input_grad(0);
    Tensor* dB = ctx.input_grad(1);
    for (std::size_t s = 0; s < batch; ++s) {
      const double* dc = dC.ptr() + s * m * n;
      if (dA) kernels::gemm(Trans::kNo, Trans::kYes, m, k, n, dc, B.ptr() + s * k * n, dA->ptr() + s * m * k, true);
      if (dB) kernels::gemm(Trans::kYes, Trans::kNo, k, n, m, A.ptr() + s * m * k, dc, dB->ptr() + s * k * n, true);
    }
  });
}

Var bmm_nt(Var a, Var b) {
  Graph& g = graph_of(a, b);
  const Tensor& A = g.value(a);
  const Tensor& B = g.value(b);
  require_rank(A, 3, "bmm_nt");
  require_rank(B, 3, "bmm_nt");
  if (A.dim(0) != B.dim(0) || A.dim(2) != B.dim(2)) {
    throw DimensionError("bmm_nt: cannot multiply " + shape_string(A.shape()) + " by transpose of " +
                         shape_string(B.shape()));
  }
  const std::size_t batch = A.dim(0), m = A.dim(1), k = A.dim(2), n = B.dim(1);
  Tensor C({batch, m, n});
  for (std::size_t s = 0; s < batch; ++s) {
    kernels::gemm(Trans::kNo, Trans::kYes, m, n, k, A.ptr() + s * m * k, B.ptr() + s * n * k,
                  C.ptr() + s * m * n, false);
  }
  return g.record(std::move(C), {a, b}, [batch, m, n, k](BackwardContext& ctx) {
    const Tensor& dC = ctx.output_grad();
    const Tensor& A = ctx.input(0);
    const Tensor& B = ctx.input(1);
    Tensor* dA = ctx.input_grad(0);
    Tensor* dB = ctx.input_grad(1);
    for (std::size_t s = 0; s < batch; ++s) {
      const double* dc = dC.ptr() + s * m * n;
      // dA = dC B, dB = dC^T A
      if (dA) kernels::gemm(Trans::kNo, Trans::kNo, m, k, n, dc, B.ptr() + s * n * k, dA->ptr() + s * m * k, true);
      if (dB) kernels::gemm(Trans::kYes, Trans::kNo, n, k, m, dc, A.ptr() + s * m * k, dB->ptr() + s * n * k, true);
    }
  });
}

Var add(Var a, Var b) {
  Graph& g = graph_of(a, b);
  const Tensor& A = g.value(a);
  const Tensor& B = g.value(b);
  require_same_shape(A, B, "add");
  Tensor C = A;
  axpy(C, B);
  return g.record(std::move(C), {a, b}, [](BackwardContext& ctx) {
    if (Tensor* dA = ctx.input_grad(0)) axpy(*dA, ctx.output_grad());
    if (Tensor* dB = ctx.input_grad(1)) axpy(*dB, ctx.output_grad());
  });
}

Var sub(Var a, Var b) {
  Graph& g = graph_of(a, b);
  const Tensor& A = g.value(a);
  const Tensor& B = g.value(b);
  require_same_shape(A, B, "sub");
  Tensor C = A;
  axpy(C, B, -1.0);
  return g.record(std::move(C), {a, b}, [](BackwardContext& ctx) {
    if (Tensor* dA = ctx.input_grad(0)) axpy(*dA, ctx.output_grad());
    if (Tensor* dB = ctx.input_grad(1)) axpy(*dB, ctx.output_grad(), -1.0);
  });
}

Var add_broadcast(Var a, Var b) {
  Graph& g = graph_of(a, b);
  const Tensor& A = g.value(a);
  const Tensor& B = g.value(b);
  // Accept [d] or [1,d] style bias rows as well as exact suffixes.
  Shape bs = B.shape();
  while (bs.size() > 1 && bs.front() == 1) bs.erase(bs.begin());
  const bool suffix = bs.size() <= A.rank() && std::equal(bs.rbegin(), bs.rend(), A.shape().rbegin());
  if (!suffix) {
    throw DimensionError("add_broadcast: " + shape_string(B.shape()) + " does not broadcast onto " +
                         shape_string(A.shape()));
  }
  const std::size_t block = B.size();
  const std::size_t reps = A.size() / block;
  Tensor C = A;
  for (std::size_t r = 0; r < reps; ++r) {
    double* c = C.ptr() + r * block;
    for (std::size_t i = 0; i < block; ++i) c[i] += B[i];
  }
  return g.record(std::move(C), {a, b}, [block, reps](BackwardContext& ctx) {
    const Tensor& dC = ctx.output_grad();
    if (Tensor* dA = ctx.input_grad(0)) axpy(*dA, dC);
    if (Tensor* dB = ctx.input_grad(1)) {
      for (std::size_t r = 0; r < reps; ++r) {
        const double* d = dC.ptr() + r * block;
        for (std::size_t i = 0; i < block; ++i) (*dB)[i] += d[i];
      }
    }
  });
}

Var scale(Var a, double s) {
  Graph& g = graph_of(a);
  Tensor C = g.value(a);
  for (double& v : C.data()) v *= s;
  return g.record(std::move(C), {a}, [s](BackwardContext& ctx) {
    if (Tensor* dA = ctx.input_grad(0)) axpy(*dA, ctx.output_grad(), s);
  });
}

Var mul_scalar(Var a, Var s) {
  Graph& g = graph_of(a, s);
  const Tensor& S = g.value(s);
  if (S.size() != 1) throw DimensionError("mul_scalar: factor must have one element");
  const double sv = S[0];
  Tensor C = g.value(a);
  for (double& v : C.data()) v *= sv;
  return g.record(std::move(C), {a, s}, [](BackwardContext& ctx) {
    const Tensor& dC = ctx.output_grad();
    const Tensor& A = ctx.input(0);
    if (Tensor* dA = ctx.input_grad(0)) axpy(*dA, dC, ctx.input(1)[0]);
    if (Tensor* dS = ctx.input_grad(1)) {
      double acc = 0.0;
      for (std::size_t i = 0; i < A.size(); ++i) acc += dC[i] * A[i];
      (*dS)[0] += acc;
    }
  });
}

Var add_scalar(Var a, Var s) {
  Graph& g = graph_of(a, s);
  const Tensor& S = g.value(s);
  if (S.size() != 1) throw DimensionError("add_scalar: offset must have one element");
  const double sv = S[0];
  Tensor C = g.value(a);
  for (double& v : C.data()) v += sv;
  return g.record(std::move(C), {a, s}, [](BackwardContext& ctx) {
    const Tensor& dC = ctx.output_grad();
    if (Tensor* dA = ctx.input_grad(0)) axpy(*dA, dC);
    if (Tensor* dS = ctx.input_grad(1)) {
      double acc = 0.0;
      for (double v : dC.data()) acc += v;
      (*dS)[0] += acc;
    }
  });
}

Var square(Var a) {
  Graph& g = graph_of(a);
  Tensor C = g.value(a);
  for (double& v : C.data()) v *= v;
  return g.record(std::move(C), {a}, [](BackwardContext& ctx) {
    if (Tensor* dA = ctx.input_grad(0)) {
      const Tensor& A = ctx.input(0);
      const Tensor& dC = ctx.output_grad();
      for (std::size_t i = 0; i < A.size(); ++i) (*dA)[i] += 2.0 * A[i] * dC[i];
    }
  });
}

Var sum(Var a) {
  Graph& g = graph_of(a);
  double s = 0.0;
  for (double v : g.value(a).data()) s += v;
  return g.record(Tensor::scalar(s), {a}, [](BackwardContext& ctx) {
    if (Tensor* dA = ctx.input_grad(0)) {
      const double d = ctx.output_grad()[0];
      for (double& v : dA->data()) v += d;
    }
  });
}

Var reshape(Var a, Shape shape) {
  Graph& g = graph_of(a);
  Tensor C = g.value(a).reshaped(std::move(shape));
  return g.record(std::move(C), {a}, [](BackwardContext& ctx) {
    if (Tensor* dA = ctx.input_grad(0)) {
      const Tensor& dC = ctx.output_grad();
      for (std::size_t i = 0; i < dC.size(); ++i) (*dA)[i] += dC[i];
    }
  });
}

Var relu(Var a) {
  Graph& g = graph_of(a);
  Tensor C = g.value(a);
  for (double& v : C.data()) v = v > 0.0 ? v : 0.0;
  return g.record(std::move(C), {a}, [](BackwardContext& ctx) {
    if (Tensor* dA = ctx.input_grad(0)) {
      const Tensor& A = ctx.input(0);
      const Tensor& dC = ctx.output_grad();
      for (std::size_t i = 0; i < A.size(); ++i) {
        if (A[i] > 0.0) (*dA)[i] += dC[i];
      }
    }
  });
}

Var dropout(Var a, double rate, Rng& rng, bool training) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ConfigError("dropout rate must lie in [0, 1), got " + std::to_string(rate));
  }
  if (!training || rate == 0.0) return a;
  Graph& g = graph_of(a);
  const Tensor& A = g.value(a);
  auto mask = std::make_shared<std::vector<double>>(A.size());
  const double keep_scale = 1.0 / (1.0 - rate);
  std::bernoulli_distribution drop(rate);
  for (auto& m : *mask) m = drop(rng) ? 0.0 : keep_scale;
  Tensor C = A;
  for (std::size_t i = 0; i < C.size(); ++i) C[i] *= (*mask)[i];
  return g.record(std::move(C), {a}, [mask](BackwardContext& ctx) {
    if (Tensor* dA = ctx.input_grad(0)) {
      const Tensor& dC = ctx.output_grad();
      for (std::size_t i = 0; i < dC.size(); ++i) (*dA)[i] += dC[i] * (*mask)[i];
    }
  });
}

Var softmax_rows(Var a) {
  Graph& g = graph_of(a);
  Tensor Y = g.value(a);
  const std::size_t n = Y.cols();
  const std::size_t rows = Y.rows();
  for (std::size_t r = 0; r < rows; ++r) {
    double* y = Y.ptr() + r * n;
    const double mx = *std::max_element(y, y + n);
    double z = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      y[j] = std::exp(y[j] - mx);
      z += y[j];
    }
    for (std::size_t j = 0; j < n; ++j) y[j] /= z;
  }
  return g.record(std::move(Y), {a}, [rows, n](BackwardContext& ctx) {
    Tensor* dA = ctx.input_grad(0);
    if (!dA) return;
    const Tensor& Y = ctx.output();
    const Tensor& dY = ctx.output_grad();
    for (std::size_t r = 0; r < rows; ++r) {
      const double* y = Y.ptr() + r * n;
      const double* dy = dY.ptr() + r * n;
      double dot = 0.0;
      for (std::size_t j = 0; j < n; ++j) dot += dy[j] * y[j];
      double* dx = dA->ptr() + r * n;
      for (std::size_t j = 0; j < n; ++j) dx[j] += y[j] * (dy[j] - dot);
    }
  });
}

Var layer_norm(Var x, double gamma, double beta, double eps) {
  Graph& g = graph_of(x);
  const Tensor& X = g.value(x);
  const std::size_t d = X.cols();
  if (X.rank() == 0 || d < 2) throw DimensionError("layer_norm needs at least two features");
  const std::size_t rows = X.rows();
  // xhat and 1/sigma are kept for the reverse sweep.
  auto xhat = std::make_shared<Tensor>(X.shape());
  auto inv_sigma = std::make_shared<std::vector<double>>(rows);
  Tensor Y(X.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* xr = X.ptr() + r * d;
    double mu = 0.0;
    for (std::size_t j = 0; j < d; ++j) mu += xr[j];
    mu /= static_cast<double>(d);
    double var = 0.0;
    for (std::size_t j = 0; j < d; ++j) var += (xr[j] - mu) * (xr[j] - mu);
    var /= static_cast<double>(d);
    const double is = 1.0 / std::sqrt(var + eps);
    (*inv_sigma)[r] = is;
    double* h = xhat->ptr() + r * d;
    double* y = Y.ptr() + r * d;
    for (std::size_t j = 0; j < d; ++j) {
      h[j] = (xr[j] - mu) * is;
      y[j] = gamma * h[j] + beta;
    }
  }
  return g.record(std::move(Y), {x}, [xhat, inv_sigma, rows, d, gamma](BackwardContext& ctx) {
    Tensor* dX = ctx.input_grad(0);
    if (!dX) return;
    const Tensor& dY = ctx.output_grad();
    const double inv_d = 1.0 / static_cast<double>(d);
    for (std::size_t r = 0; r < rows; ++r) {
      const double* h = xhat->ptr() + r * d;
      const double* dy = dY.ptr() + r * d;
      double mean_dh = 0.0, mean_dh_h = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        mean_dh += gamma * dy[j];
        mean_dh_h += gamma * dy[j] * h[j];
      }
      mean_dh *= inv_d;
      mean_dh_h *= inv_d;
      double* dx = dX->ptr() + r * d;
      const double is = (*inv_sigma)[r];
      for (std::size_t j = 0; j < d; ++j) {
        dx[j] += is * (gamma * dy[j] - mean_dh - h[j] * mean_dh_h);
      }
    }
  });
}

Var prepend_row(Var x, Var row) {
  Graph& g = graph_of(x, row);
  const Tensor& X = g.value(x);
  const Tensor& R = g.value(row);
  require_rank(X, 3, "prepend_row");
  const std::size_t b = X.dim(0), n = X.dim(1), d = X.dim(2);
  if (R.size() != d) {
    throw DimensionError("prepend_row: row of " + shape_string(R.shape()) + " for width " + std::to_string(d));
  }
  Tensor Y({b, n + 1, d});
  for (std::size_t s = 0; s < b; ++s) {
    double* y = Y.ptr() + s * (n + 1) * d;
    std::copy(R.ptr(), R.ptr() + d, y);
    std::copy(X.ptr() + s * n * d, X.ptr() + (s + 1) * n * d, y + d);
  }
  return g.record(std::move(Y), {x, row}, [b, n, d](BackwardContext& ctx) {
    const Tensor& dY = ctx.output_grad();
    Tensor* dX = ctx.input_grad(0);
    Tensor* dR = ctx.input_grad(1);
    for (std::size_t s = 0; s < b; ++s) {
      const double* dy = dY.ptr() + s * (n + 1) * d;
      if (dR) {
        for (std::size_t j = 0; j < d; ++j) (*dR)[j] += dy[j];
      }
      if (dX) {
        double* dx = dX->ptr() + s * n * d;
        for (std::size_t j = 0; j < n * d; ++j) dx[j] += dy[d + j];
      }
    }
  });
}

Var mean_rows(Var x, std::size_t first) {
  Graph& g = graph_of(x);
  const Tensor& X = g.value(x);
  require_rank(X, 3, "mean_rows");
  const std::size_t b = X.dim(0), n = X.dim(1), d = X.dim(2);
  if (first >= n) throw DimensionError("mean_rows: no rows left to average");
  const double inv = 1.0 / static_cast<double>(n - first);
  Tensor Y({b, d});
  for (std::size_t s = 0; s < b; ++s) {
    double* y = Y.ptr() + s * d;
    for (std::size_t i = first; i < n; ++i) {
      const double* xr = X.ptr() + (s * n + i) * d;
      for (std::size_t j = 0; j < d; ++j) y[j] += xr[j];
    }
    for (std::size_t j = 0; j < d; ++j) y[j] *= inv;
  }
  return g.record(std::move(Y), {x}, [b, n, d, first, inv](BackwardContext& ctx) {
    Tensor* dX = ctx.input_grad(0);
    if (!dX) return;
    const Tensor& dY = ctx.output_grad();
    for (std::size_t s = 0; s < b; ++s) {
      const double* dy = dY.ptr() + s * d;
      for (std::size_t i = first; i < n; ++i) {
        double* dx = dX->ptr() + (s * n + i) * d;
        for (std::size_t j = 0; j < d; ++j) dx[j] += dy[j] * inv;
      }
    }
  });
}

Var select_row(Var x, std::size_t idx) {
  Graph& g = graph_of(x);
  const Tensor& X = g.value(x);
  require_rank(X, 3, "select_row");
  const std::size_t b = X.dim(0), n = X.dim(1), d = X.dim(2);
  if (idx >= n) throw DimensionError("select_row: index out of range");
  Tensor Y({b, d});
  for (std::size_t s = 0; s < b; ++s) {
    std::copy_n(X.ptr() + (s * n + idx) * d, d, Y.ptr() + s * d);
  }
  return g.record(std::move(Y), {x}, [b, n, d, idx](BackwardContext& ctx) {
    Tensor* dX = ctx.input_grad(0);
    if (!dX) return;
    const Tensor& dY = ctx.output_grad();
    for (std::size_t s = 0; s < b; ++s) {
      double* dx = dX->ptr() + (s * n + idx) * d;
      for (std::size_t j = 0; j < d; ++j) dx[j] += dY[s * d + j];
    }
  });
}

}  // namespace wit::num
