#include "mmlr/kernels.hpp"

#include <cstring>

namespace mmlr::kernels {

namespace {

// One output row of a * b: c[i,:] accumulated in increasing-k order.
inline void matmul_row(const double* a, const double* b, double* c, int i, int k, int n) {
  double* ci = c + static_cast<std::size_t>(i) * n;
  std::memset(ci, 0, sizeof(double) * static_cast<std::size_t>(n));
  const double* ai = a + static_cast<std::size_t>(i) * k;
  for (int l = 0; l < k; ++l) {
    const double ail = ai[l];
    const double* bl = b + static_cast<std::size_t>(l) * n;
    for (int j = 0; j < n; ++j) ci[j] += ail * bl[j];
  }
}

// One output row of a^T * b: row i of the product uses column i of a.
inline void matmul_ta_row(const double* a, const double* b, double* c, int i, int m, int k,
                          int n) {
  double* ci = c + static_cast<std::size_t>(i) * n;
  std::memset(ci, 0, sizeof(double) * static_cast<std::size_t>(n));
  for (int l = 0; l < k; ++l) {
    const double ali = a[static_cast<std::size_t>(l) * m + i];
    const double* bl = b + static_cast<std::size_t>(l) * n;
    for (int j = 0; j < n; ++j) ci[j] += ali * bl[j];
  }
}

// One output row of a * b^T: dot products of row i of a with rows of b.
inline void matmul_tb_row(const double* a, const double* b, double* c, int i, int k, int n) {
  double* ci = c + static_cast<std::size_t>(i) * n;
  const double* ai = a + static_cast<std::size_t>(i) * k;
  for (int j = 0; j < n; ++j) {
    const double* bj = b + static_cast<std::size_t>(j) * k;
    double s = 0.0;
    for (int l = 0; l < k; ++l) s += ai[l] * bj[l];
    ci[j] = s;
  }
}

}  // namespace

void matmul_serial(const double* a, const double* b, double* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) matmul_row(a, b, c, i, k, n);
}

void matmul_parallel(const double* a, const double* b, double* c, int m, int k, int n) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) matmul_row(a, b, c, i, k, n);
}

void matmul_ta_serial(const double* a, const double* b, double* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) matmul_ta_row(a, b, c, i, m, k, n);
}

void matmul_ta_parallel(const double* a, const double* b, double* c, int m, int k, int n) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) matmul_ta_row(a, b, c, i, m, k, n);
}

void matmul_tb_serial(const double* a, const double* b, double* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) matmul_tb_row(a, b, c, i, k, n);
}

void matmul_tb_parallel(const double* a, const double* b, double* c, int m, int k, int n) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) matmul_tb_row(a, b, c, i, k, n);
}

}  // namespace mmlr::kernels
