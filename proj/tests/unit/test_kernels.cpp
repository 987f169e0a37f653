#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "wit/numcore/kernels.hpp"

using namespace wit::num::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

double get(const std::vector<double>& m, Trans t, std::size_t rows, std::size_t cols, std::size_t i, std::size_t j) {
  // Element (i, j) of op(M), where op(M) is rows x cols.
  return t == Trans::kNo ? m[i * cols + j] : m[j * rows + i];
}

}  // namespace

TEST_CASE("serial and parallel gemm agree bitwise and match the definition") {
  std::mt19937_64 rng(7);
  set_max_threads(4);
  for (Trans ta : {Trans::kNo, Trans::kYes}) {
    for (Trans tb : {Trans::kNo, Trans::kYes}) {
      for (int trial = 0; trial < 5; ++trial) {
        std::uniform_int_distribution<std::size_t> dim(1, 70);
        const std::size_t m = dim(rng), n = dim(rng), k = dim(rng);
        const auto a = random_vec(m * k, rng);
        const auto b = random_vec(k * n, rng);
        auto c0 = random_vec(m * n, rng);
        auto c1 = c0;
        auto c2 = c0;
        const bool acc = trial % 2 == 1;
        gemm_serial(ta, tb, m, n, k, a.data(), b.data(), c1.data(), acc);
        gemm_parallel(ta, tb, m, n, k, a.data(), b.data(), c2.data(), acc);
        CHECK(std::memcmp(c1.data(), c2.data(), c1.size() * sizeof(double)) == 0);
        double worst = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            double s = acc ? c0[i * n + j] : 0.0;
            for (std::size_t p = 0; p < k; ++p) s += get(a, ta, m, k, i, p) * get(b, tb, k, n, p, j);
            worst = std::max(worst, std::abs(s - c1[i * n + j]));
          }
        }
        CHECK(worst < 1e-12);
      }
    }
  }
  set_max_threads(0);
}
