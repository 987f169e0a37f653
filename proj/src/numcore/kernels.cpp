#include "wit/numcore/kernels.hpp"

#include <omp.h>

#include <vector>

namespace wit::num::kernels {
namespace {

int g_threads = 0;

constexpr std::size_t kParallelWork = 1u << 15;

// One output row of C with B stored k x n. Shared by the serial and parallel
// drivers; the inner loop runs over contiguous j so it vectorizes.
inline void gemm_row(Trans ta, std::size_t i, std::size_t m, std::size_t n, std::size_t k, const double* a,
                     const double* b, double* c, bool accumulate) {
  double* crow = c + i * n;
  if (!accumulate) {
    for (std::size_t j = 0; j < n; ++j) crow[j] = 0.0;
  }
  for (std::size_t p = 0; p < k; ++p) {
    const double aip = ta == Trans::kNo ? a[i * k + p] : a[p * m + i];
    const double* brow = b + p * n;
    for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
  }
}

// B as a k x n row-major block, transposing into `scratch` when needed.
const double* plain_b(Trans tb, std::size_t n, std::size_t k, const double* b, std::vector<double>& scratch) {
  if (tb == Trans::kNo) return b;
  scratch.resize(k * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t p = 0; p < k; ++p) scratch[p * n + j] = b[j * k + p];
  return scratch.data();
}

}  // namespace

void gemm_serial(Trans ta, Trans tb, std::size_t m, std::size_t n, std::size_t k,
                 const double* a, const double* b, double* c, bool accumulate) {
  std::vector<double> scratch;
  const double* bk = plain_b(tb, n, k, b, scratch);
  for (std::size_t i = 0; i < m; ++i) gemm_row(ta, i, m, n, k, a, bk, c, accumulate);
}

void gemm_parallel(Trans ta, Trans tb, std::size_t m, std::size_t n, std::size_t k,
                   const double* a, const double* b, double* c, bool accumulate) {
  std::vector<double> scratch;
  const double* bk = plain_b(tb, n, k, b, scratch);
  const int threads = max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
    gemm_row(ta, static_cast<std::size_t>(i), m, n, k, a, bk, c, accumulate);
  }
}

void gemm(Trans ta, Trans tb, std::size_t m, std::size_t n, std::size_t k,
          const double* a, const double* b, double* c, bool accumulate) {
  if (m > 1 && m * n * k >= kParallelWork && max_threads() > 1) {
    gemm_parallel(ta, tb, m, n, k, a, b, c, accumulate);
  } else {
    gemm_serial(ta, tb, m, n, k, a, b, c, accumulate);
  }
}

void set_max_threads(int n) { g_threads = n; }

int max_threads() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

}  // namespace wit::num::kernels
