#include "pilab/kernel.hpp"

#include <cstring>

extern "C" {
// Netlib zgemm; linked from OpenBLAS.
void zgemm_(const char* transa, const char* transb, const int* m, const int* n,
            const int* k, const void* alpha, const void* a, const int* lda,
            const void* b, const int* ldb, const void* beta, void* c,
            const int* ldc);
}

namespace pilab {

KernelMatrix KernelMatrix::identity(const Grid& g) {
  KernelMatrix K(g);
  for (int i = 0; i < g.n; ++i) K.at(i, i) = 1.0 / K.weight;
  return K;
}

Field KernelMatrix::apply(const Field& f) const {
  require(static_cast<int>(f.size()) == grid.n, "kernel apply: size mismatch");
  const int n = grid.n;
  Field out(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const cplx* row = entries.data() + static_cast<size_t>(i) * n;
    cplx acc = 0;
    for (int j = 0; j < n; ++j) acc += row[j] * f[j];
    out[i] = acc * weight;
  }
  return out;
}

void matmul_serial(const cplx* A, const cplx* B, cplx* C, int n) {
  std::memset(C, 0, sizeof(cplx) * static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    cplx* Ci = C + static_cast<size_t>(i) * n;
    for (int k = 0; k < n; ++k) {
      const cplx a = A[static_cast<size_t>(i) * n + k];
      if (a == cplx(0)) continue;
      const cplx* Bk = B + static_cast<size_t>(k) * n;
      for (int j = 0; j < n; ++j) Ci[j] += a * Bk[j];
    }
  }
}

// Row-parallel ikj with a blocked k loop. Each output row is owned by one
// thread and accumulated in a fixed k order, so results are independent of
// the thread count (determinism contract).
void matmul_omp(const cplx* A, const cplx* B, cplx* C, int n) {
  constexpr int KB = 64;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    cplx* Ci = C + static_cast<size_t>(i) * n;
    std::memset(Ci, 0, sizeof(cplx) * n);
    for (int k0 = 0; k0 < n; k0 += KB) {
      int k1 = std::min(n, k0 + KB);
      for (int k = k0; k < k1; ++k) {
        const cplx a = A[static_cast<size_t>(i) * n + k];
        const double ar = a.real(), ai = a.imag();
        const double* Bk =
            reinterpret_cast<const double*>(B + static_cast<size_t>(k) * n);
        double* Cd = reinterpret_cast<double*>(Ci);
        for (int j = 0; j < n; ++j) {
          double br = Bk[2 * j], bi = Bk[2 * j + 1];
          Cd[2 * j] += ar * br - ai * bi;
          Cd[2 * j + 1] += ar * bi + ai * br;
        }
      }
    }
  }
}

void matmul_blas(const cplx* A, const cplx* B, cplx* C, int n) {
  // Row-major product via the column-major identity (AB)^T = B^T A^T.
  const cplx one(1, 0), zero(0, 0);
  zgemm_("N", "N", &n, &n, &n, &one, B, &n, A, &n, &zero, C, &n);
}

KernelMatrix kernel_compose(const KernelMatrix& K1, const KernelMatrix& K2,
                            MatmulBackend backend) {
  require(K1.grid.same(K2.grid) && K1.weight == K2.weight,
          "kernel_compose: grid/weight mismatch");
  const int n = K1.grid.n;
  KernelMatrix out(K1.grid);
  switch (backend) {
    case MatmulBackend::Serial:
      matmul_serial(K1.entries.data(), K2.entries.data(), out.entries.data(), n);
      break;
    case MatmulBackend::OpenMP:
      matmul_omp(K1.entries.data(), K2.entries.data(), out.entries.data(), n);
      break;
    case MatmulBackend::Blas:
      matmul_blas(K1.entries.data(), K2.entries.data(), out.entries.data(), n);
      break;
  }
  for (auto& v : out.entries) v *= out.weight;
  return out;
}

namespace {
// Deterministic unit-norm start vector (splitmix64 bits -> [0,1) doubles).
Field seed_vector(int n) {
  Field v(n);
  uint64_t s = 0x9e3779b97f4a7c15ull;
  auto next = [&s]() {
    s += 0x9e3779b97f4a7c15ull;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53;
  };
  for (int i = 0; i < n; ++i) v[i] = cplx(next() - 0.5, next() - 0.5);
  double nv = 0;
  for (auto& c : v) nv += std::norm(c);
  nv = std::sqrt(nv);
  for (auto& c : v) c /= nv;
  return v;
}
}  // namespace

double operator_norm(const KernelMatrix& K) {
  require(all_finite(K.entries), "operator_norm: non-finite entries");
  const int n = K.grid.n;
  const double w = K.weight;
  Field v = seed_vector(n);
  double sigma2 = 0, prev = -1;
  // power iteration on (wK)^* (wK)
  Field kv(n), w2(n);
  for (int it = 0; it < 300; ++it) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      const cplx* row = K.entries.data() + static_cast<size_t>(i) * n;
      cplx acc = 0;
      for (int j = 0; j < n; ++j) acc += row[j] * v[j];
      kv[i] = acc * w;
    }
    // adjoint apply, row-sequential for cache locality and fixed summation order
    std::fill(w2.begin(), w2.end(), cplx(0));
    for (int i = 0; i < n; ++i) {
      const cplx* row = K.entries.data() + static_cast<size_t>(i) * n;
      const cplx c = kv[i];
      for (int j = 0; j < n; ++j) w2[j] += std::conj(row[j]) * c;
    }
    for (int j = 0; j < n; ++j) w2[j] *= w;
    double nw = 0;
    for (const auto& c : w2) nw += std::norm(c);
    nw = std::sqrt(nw);
    if (nw == 0) return 0.0;
    sigma2 = nw;  // ||(wK)^*(wK) v|| with ||v|| = 1 -> top eigenvalue
    for (int j = 0; j < n; ++j) v[j] = w2[j] / nw;
    if (it >= 8 && std::abs(sigma2 - prev) <= 1e-14 * std::max(1.0, sigma2))
      break;
    prev = sigma2;
  }
  return std::sqrt(sigma2);
}

double distance_opnorm(const KernelMatrix& K1, const KernelMatrix& K2) {
  require(K1.grid.same(K2.grid), "distance_opnorm: grid mismatch");
  KernelMatrix D(K1.grid);
  for (size_t i = 0; i < D.entries.size(); ++i)
    D.entries[i] = K1.entries[i] - K2.entries[i];
  return operator_norm(D);
}

KernelMatrix kernel_from_operator(
    const std::function<Field(const Field&)>& apply, const Grid& g) {
  KernelMatrix K(g);
  const int n = g.n;
  Field delta(n, cplx(0));
  for (int j = 0; j < n; ++j) {
    delta[j] = 1.0;
    Field col = apply(delta);
    delta[j] = 0.0;
    require(all_finite(col), "kernel_from_operator: map produced non-finite output");
    for (int i = 0; i < n; ++i) K.at(i, j) = col[i] / K.weight;
  }
  return K;
}

KernelMatrix kernel_power(const KernelMatrix& K, int n, MatmulBackend backend) {
  require(n >= 1, "kernel_power: n >= 1");
  // binary powering: square-and-multiply over the composition
  KernelMatrix base = K;
  KernelMatrix result;
  bool have = false;
  int m = n;
  while (m > 0) {
    if (m & 1) {
      result = have ? kernel_compose(result, base, backend) : base;
      have = true;
    }
    m >>= 1;
    if (m) base = kernel_compose(base, base, backend);
  }
  return result;
}

}  // namespace pilab
