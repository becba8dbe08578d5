#pragma once
// Quadrature kernel matrices: K acts on fields as (K f)(x_i) = dx * sum_j K_ij f(x_j).
// Composition, operator norms, and materialization of linear maps.

#include <functional>

#include "pilab/core.hpp"

namespace pilab {

struct KernelMatrix {
  Grid grid;
  double weight = 0.0;             // quadrature weight, equals grid.dx()
  std::vector<cplx> entries;       // row-major n*n, entries[i*n+j] = K(x_i, x_j)

  KernelMatrix() = default;
  explicit KernelMatrix(const Grid& g)
      : grid(g), weight(g.dx()), entries(static_cast<size_t>(g.n) * g.n) {}

  cplx& at(int i, int j) { return entries[static_cast<size_t>(i) * grid.n + j]; }
  const cplx& at(int i, int j) const {
    return entries[static_cast<size_t>(i) * grid.n + j];
  }

  static KernelMatrix identity(const Grid& g);
  Field apply(const Field& f) const;
};

enum class MatmulBackend { Serial, OpenMP, Blas };

// entries = weight * (K1.entries @ K2.entries); operator composition under the
// quadrature pairing. Default backend is BLAS; the hand-written OpenMP kernel
// and its serial reference are kept for testing and benchmarking.
KernelMatrix kernel_compose(const KernelMatrix& K1, const KernelMatrix& K2,
                            MatmulBackend backend = MatmulBackend::Blas);

// C = A @ B for row-major n x n complex blocks (no quadrature weight).
void matmul_serial(const cplx* A, const cplx* B, cplx* C, int n);
void matmul_omp(const cplx* A, const cplx* B, cplx* C, int n);
void matmul_blas(const cplx* A, const cplx* B, cplx* C, int n);

// Largest singular value of (weight * entries): deterministic power iteration
// on K^* K, fixed seed start vector.
double operator_norm(const KernelMatrix& K);

// operator_norm(K1 - K2).
double distance_opnorm(const KernelMatrix& K1, const KernelMatrix& K2);

// Materialize a linear map: column j = apply(delta_j)/weight, evaluated
// column-blocked so implementations may batch.
KernelMatrix kernel_from_operator(const std::function<Field(const Field&)>& apply,
                                  const Grid& g);

// K^n by binary powering (n >= 1), using kernel_compose.
KernelMatrix kernel_power(const KernelMatrix& K, int n,
                          MatmulBackend backend = MatmulBackend::Blas);

}  // namespace pilab
