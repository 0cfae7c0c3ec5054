// Timing comparison of the serial and OpenMP-parallel dense kernels. The two
// variants run the same per-row routine, so besides throughput this reports
// whether their outputs are bitwise identical (they must be).

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "mmlr/kernels.hpp"
#include "mmlr/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Kernel = void (*)(const double*, const double*, double*, int, int, int);

struct Variant {
  const char* name;
  Kernel serial;
  Kernel parallel;
};

std::vector<double> random_buffer(mmlr::Rng& rng, int count) {
  std::vector<double> buf(static_cast<std::size_t>(count));
  for (double& v : buf) v = rng.normal();
  return buf;
}

double time_call(Kernel kernel, const double* a, const double* b, double* c, int m,
                 int k, int n, int reps) {
  const auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) kernel(a, b, c, m, k, n);
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  int size = argc > 1 ? std::atoi(argv[1]) : 384;
  if (size < 16) size = 16;
  const int m = size, k = size, n = size;
  const double gflop = 2.0 * m * k * n * 1e-9;

#ifdef _OPENMP
  std::printf("openmp: enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("openmp: disabled (serial build)\n");
#endif
  std::printf("problem: %d x %d x %d (%.3f GFLOP per call)\n\n", m, k, n, gflop);

  mmlr::Rng rng(12345);
  const std::vector<double> a = random_buffer(rng, m * k);
  const std::vector<double> b = random_buffer(rng, k * n);
  std::vector<double> c_serial(static_cast<std::size_t>(m) * n);
  std::vector<double> c_parallel(c_serial.size());

  const Variant variants[] = {
      {"matmul", mmlr::kernels::matmul_serial, mmlr::kernels::matmul_parallel},
      {"matmul_ta", mmlr::kernels::matmul_ta_serial, mmlr::kernels::matmul_ta_parallel},
      {"matmul_tb", mmlr::kernels::matmul_tb_serial, mmlr::kernels::matmul_tb_parallel},
  };

  std::printf("%-10s %14s %14s %9s %9s\n", "kernel", "serial GFLOP/s",
              "parallel GFLOP/s", "speedup", "bitwise");
  bool all_bitwise = true;
  for (const Variant& v : variants) {
    // One warm-up call each, then timed repetitions.
    v.serial(a.data(), b.data(), c_serial.data(), m, k, n);
    v.parallel(a.data(), b.data(), c_parallel.data(), m, k, n);
    const bool bitwise = std::memcmp(c_serial.data(), c_parallel.data(),
                                     c_serial.size() * sizeof(double)) == 0;
    all_bitwise = all_bitwise && bitwise;

    const int reps = 3;
    const double ts = time_call(v.serial, a.data(), b.data(), c_serial.data(), m, k,
                                n, reps);
    const double tp = time_call(v.parallel, a.data(), b.data(), c_parallel.data(), m,
                                k, n, reps);
    std::printf("%-10s %14.2f %14.2f %9.2fx %9s\n", v.name, gflop / ts, gflop / tp,
                ts / tp, bitwise ? "yes" : "NO");
  }

  if (!all_bitwise) {
    std::printf("\nerror: parallel kernels diverged from serial output\n");
    return 1;
  }
  return 0;
}
