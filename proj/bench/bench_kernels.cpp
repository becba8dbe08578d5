// Timing harness for the matmul backends behind kernel composition:
// hand-written serial, OpenMP-parallel, and BLAS. Usage: bench_kernels [n] [reps]

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "pilab/kernel.hpp"

using pilab::cplx;

namespace {

uint64_t splitmix64(uint64_t& s) {
  uint64_t z = (s += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double unit(uint64_t& s) {
  return 2.0 * (splitmix64(s) >> 11) * 0x1.0p-53 - 1.0;
}

}  // namespace

int main(int argc, char** argv) {
  int n = argc > 1 ? std::atoi(argv[1]) : 512;
  int reps = argc > 2 ? std::atoi(argv[2]) : 3;
  if (n < 2 || reps < 1) {
    std::fprintf(stderr, "usage: %s [n >= 2] [reps >= 1]\n", argv[0]);
    return 2;
  }

  size_t nn = static_cast<size_t>(n) * n;
  std::vector<cplx> A(nn), B(nn), C(nn);
  uint64_t seed = 42;
  for (size_t i = 0; i < nn; ++i) A[i] = cplx(unit(seed), unit(seed));
  for (size_t i = 0; i < nn; ++i) B[i] = cplx(unit(seed), unit(seed));

  auto time_backend = [&](const char* name,
                          void (*mm)(const cplx*, const cplx*, cplx*, int)) {
    mm(A.data(), B.data(), C.data(), n);  // warm up caches / thread pools
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
      auto t0 = std::chrono::steady_clock::now();
      mm(A.data(), B.data(), C.data(), n);
      auto t1 = std::chrono::steady_clock::now();
      best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    double gflops = 8.0 * n * n * static_cast<double>(n) / best / 1e9;
    std::printf("%-8s n=%5d  best %8.4f s  %7.2f GFLOP/s  (checksum %.6f)\n",
                name, n, best, gflops, std::abs(C[nn / 2]));
  };

  time_backend("serial", &pilab::matmul_serial);
  time_backend("openmp", &pilab::matmul_omp);
  time_backend("blas", &pilab::matmul_blas);
  return 0;
}
