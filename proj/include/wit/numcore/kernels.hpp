#pragma once

#include <cstddef>

// Dense GEMM kernels. Every kernel exists in a serial reference form and an
// OpenMP form that splits output rows across threads; both evaluate each
// output element with the same summation order, so results agree bitwise.
namespace wit::num::kernels {

enum class Trans { kNo, kYes };

/// C[m x n] = op(A) * op(B) (or += when accumulate), op(A) is m x k and
/// op(B) is k x n. All operands are contiguous row-major; a transposed
/// operand is stored in its untransposed layout.
void gemm_serial(Trans ta, Trans tb, std::size_t m, std::size_t n, std::size_t k,
                 const double* a, const double* b, double* c, bool accumulate);

void gemm_parallel(Trans ta, Trans tb, std::size_t m, std::size_t n, std::size_t k,
                   const double* a, const double* b, double* c, bool accumulate);

/// Picks the parallel kernel for large products when more than one thread
/// is available.
void gemm(Trans ta, Trans tb, std::size_t m, std::size_t n, std::size_t k,
          const double* a, const double* b, double* c, bool accumulate);

/// Caps the worker count used by the parallel kernels (<= 0 restores the
/// OpenMP default).
void set_max_threads(int n);
int max_threads();

}  // namespace wit::num::kernels
