#pragma once

namespace mmlr::kernels {

// Raw dense kernels on row-major buffers. Each parallel variant partitions
// output rows over threads and runs the identical per-row routine as its
// serial counterpart, so serial and parallel results are bitwise equal.

// c[m x n] = a[m x k] * b[k x n]
void matmul_serial(const double* a, const double* b, double* c, int m, int k, int n);
void matmul_parallel(const double* a, const double* b, double* c, int m, int k, int n);

// c[m x n] = a^T * b where a is [k x m], b is [k x n]
void matmul_ta_serial(const double* a, const double* b, double* c, int m, int k, int n);
void matmul_ta_parallel(const double* a, const double* b, double* c, int m, int k, int n);

// c[m x n] = a * b^T where a is [m x k], b is [n x k]
void matmul_tb_serial(const double* a, const double* b, double* c, int m, int k, int n);
void matmul_tb_parallel(const double* a, const double* b, double* c, int m, int k, int n);

// Flop count at and above which the multiply dispatchers pick the
// parallel kernel.
inline constexpr long long parallel_flop_threshold = 1 << 21;

}  // namespace mmlr::kernels
