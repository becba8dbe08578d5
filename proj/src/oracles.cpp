#include "pilab/oracles.hpp"

#include <lapacke.h>

#include "pilab/fft.hpp"
#include "pilab/fourier.hpp"

extern "C" {
void zgemm_(const char*, const char*, const int*, const int*, const int*,
            const void*, const void*, const int*, const void*, const int*,
            const void*, void*, const int*);
}

namespace pilab {

namespace {

// C_rm = A_rm @ B_rm^H
void gemm_abh(const cplx* A, const cplx* B, cplx* C, int n) {
  const cplx one(1, 0), zero(0, 0);
  zgemm_("C", "N", &n, &n, &n, &one, B, &n, A, &n, &zero, C, &n);
}

// In-place centered forward/inverse transform of `count` contiguous columns
// (each of length n). Equivalent to fourier()/fourier_inv() per column.
void fourier_columns(cplx* data, const Grid& g, Convention conv, int count,
                     bool inverse) {
  const int n = g.n;
  const double s = (conv == Convention::PDE) ? 1.0 : 2.0 * PI;
  const double C = (conv == Convention::PDE) ? 1.0 / std::sqrt(2.0 * PI) : 1.0;
  if (!inverse) {
    for (int c = 0; c < count; ++c) {
      cplx* col = data + static_cast<size_t>(c) * n;
      for (int j = 1; j < n; j += 2) col[j] = -col[j];
    }
    fft_raw_many(data, n, count, -1);
    std::vector<cplx> post(n);
    for (int k = 0; k < n; ++k)
      post[k] = C * g.dx() * std::exp(cplx(0, -s * g.x_min * g.xi(k, conv)));
    for (int c = 0; c < count; ++c) {
      cplx* col = data + static_cast<size_t>(c) * n;
      for (int k = 0; k < n; ++k) col[k] *= post[k];
    }
  } else {
    const double dxi = g.dxi(conv);
    std::vector<cplx> pre(n), post(n);
    for (int k = 0; k < n; ++k) pre[k] = std::exp(cplx(0, s * g.x_min * dxi * k));
    const double xi0 = g.xi_min(conv);
    for (int j = 0; j < n; ++j)
      post[j] = C * dxi * std::exp(cplx(0, s * xi0 * g.x(j)));
    for (int c = 0; c < count; ++c) {
      cplx* col = data + static_cast<size_t>(c) * n;
      for (int k = 0; k < n; ++k) col[k] *= pre[k];
    }
    fft_raw_many(data, n, count, +1);
    for (int c = 0; c < count; ++c) {
      cplx* col = data + static_cast<size_t>(c) * n;
      for (int j = 0; j < n; ++j) col[j] *= post[j];
    }
  }
}

}  // namespace

SymplecticBlocks classical_flow(const QuadraticHamiltonian& h, double t,
                                const PhysicsConfig& cfg) {
  require(std::isfinite(t), "classical_flow: non-finite time");
  double tau = cfg.convention == Convention::HA ? t / (2.0 * PI) : t;
  // G = [[B, C], [-A, -B]], G^2 = (B^2 - A C) I
  double disc = h.B * h.B - h.A * h.C;
  double c, s;  // e^{tau G} = c I + s G
  if (std::abs(disc) < 1e-14) {
    c = 1.0;
    s = tau;
  } else if (disc > 0) {
    double r = std::sqrt(disc);
    c = std::cosh(r * tau);
    s = std::sinh(r * tau) / r;
  } else {
    double r = std::sqrt(-disc);
    c = std::cos(r * tau);
    s = std::sin(r * tau) / r;
  }
  return {c + s * h.B, s * h.C, -s * h.A, c - s * h.B};
}

KernelMatrix free_kernel(const Grid& g, double t, const PhysicsConfig& cfg) {
  require(cfg.convention == Convention::PDE, "free_kernel: PDE convention only");
  if (t == 0.0) return KernelMatrix::identity(g);
  const int n = g.n;
  KernelMatrix K(g);
  // (2 pi i hbar t)^{-1/2}: principal branch, e^{-i pi/4 sgn t} amplitude
  double amp = 1.0 / std::sqrt(2.0 * PI * cfg.hbar * std::abs(t));
  cplx c = amp * std::exp(cplx(0, -PI / 4 * (t > 0 ? 1 : -1)));
  double inv = 1.0 / (2.0 * cfg.hbar * t);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double xi = g.x(i);
    for (int j = 0; j < n; ++j) {
      double d = xi - g.x(j);
      K.at(i, j) = c * std::exp(cplx(0, d * d * inv));
    }
  }
  return K;
}

Field free_propagate(const Field& f, const Grid& g, double t,
                     const PhysicsConfig& cfg) {
  std::vector<cplx> sym(g.n);
  for (int k = 0; k < g.n; ++k)
    sym[k] = std::exp(cplx(0, -t * kinetic_symbol(g.xi(k, cfg.convention), cfg)));
  return apply_multiplier(f, g, cfg.convention, sym);
}

KernelMatrix mehler_kernel(const Grid& g, double t) {
  double st = std::sin(t);
  if (std::abs(st) <= 1e-6)
    throw ExceptionalTime("harmonic kernel degenerates near t = k pi (|sin t| <= 1e-6)");
  const int n = g.n;
  int k = static_cast<int>(std::floor(t / PI));
  cplx c = std::exp(cplx(0, -(PI / 4 + k * PI / 2))) / std::sqrt(2.0 * PI);
  double a = 1.0 / std::sqrt(std::abs(st));
  double cot = std::cos(t) / st, csc = 1.0 / st;
  KernelMatrix K(g);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double x = g.x(i);
    for (int j = 0; j < n; ++j) {
      double y = g.x(j);
      K.at(i, j) =
          c * a * std::exp(cplx(0, (x * x + y * y) / 2 * cot - x * y * csc));
    }
  }
  return K;
}

KernelMatrix metaplectic_kernel(const Grid& g, const SymplecticBlocks& b,
                                const PhysicsConfig& cfg) {
  require(cfg.convention == Convention::HA, "metaplectic_kernel: HA convention only");
  require(std::abs(b.det() - 1.0) < 1e-8, "metaplectic_kernel: blocks not symplectic");
  if (std::abs(b.B) <= 1e-6)
    throw NotFreeSymplectic("block B is singular; kernel is not a function");
  const int n = g.n;
  cplx c =
      std::exp(cplx(0, -PI / 4 * (b.B > 0 ? 1 : -1))) / std::sqrt(std::abs(b.B));
  double db = b.D / b.B, ab = b.A / b.B, ib = 1.0 / b.B;
  KernelMatrix K(g);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double x = g.x(i);
    for (int j = 0; j < n; ++j) {
      double y = g.x(j);
      double phi = 0.5 * db * x * x - x * y * ib + 0.5 * ab * y * y;
      K.at(i, j) = c * std::exp(cplx(0, 2.0 * PI * phi));
    }
  }
  return K;
}

Field reference_propagate(const Potential& V, const Field& f, const Grid& g,
                          double t, const PhysicsConfig& cfg, int substeps) {
  require(substeps >= 1, "reference_propagate: substeps >= 1");
  const int n = g.n;
  const double tau = t / substeps;
  const double ps = potential_scale(cfg);
  std::vector<cplx> half_phase(n), kin(n);
  for (int i = 0; i < n; ++i)
    half_phase[i] = std::exp(cplx(0, -0.5 * tau * ps * V.value(g.x(i))));
  for (int k = 0; k < n; ++k)
    kin[k] = std::exp(cplx(0, -tau * kinetic_symbol(g.xi(k, cfg.convention), cfg)));
  Field u = f;
  for (int s = 0; s < substeps; ++s) {
    for (int i = 0; i < n; ++i) u[i] *= half_phase[i];
    u = apply_multiplier(u, g, cfg.convention, kin);
    for (int i = 0; i < n; ++i) u[i] *= half_phase[i];
  }
  require(all_finite(u), "reference_propagate: evolution diverged");
  return u;
}

KernelMatrix exact_kernel(const Potential& V, const Grid& g, double t,
                          const PhysicsConfig& cfg, int substeps) {
  require(substeps >= 1, "exact_kernel: substeps >= 1");
  const int n = g.n;
  const double tau = t / substeps;
  const double ps = potential_scale(cfg);
  std::vector<cplx> half_phase(n), kin(n);
  for (int i = 0; i < n; ++i)
    half_phase[i] = std::exp(cplx(0, -0.5 * tau * ps * V.value(g.x(i))));
  for (int k = 0; k < n; ++k)
    kin[k] = std::exp(cplx(0, -tau * kinetic_symbol(g.xi(k, cfg.convention), cfg)));
  // columns of the evolving kernel, column-contiguous for batched FFTs
  std::vector<cplx> cols(static_cast<size_t>(n) * n, cplx(0));
  for (int j = 0; j < n; ++j) cols[static_cast<size_t>(j) * n + j] = 1.0;
  for (int s = 0; s < substeps; ++s) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
      cplx* col = cols.data() + static_cast<size_t>(j) * n;
      for (int i = 0; i < n; ++i) col[i] *= half_phase[i];
    }
    fourier_columns(cols.data(), g, cfg.convention, n, false);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
      cplx* col = cols.data() + static_cast<size_t>(j) * n;
      for (int k = 0; k < n; ++k) col[k] *= kin[k];
    }
    fourier_columns(cols.data(), g, cfg.convention, n, true);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
      cplx* col = cols.data() + static_cast<size_t>(j) * n;
      for (int i = 0; i < n; ++i) col[i] *= half_phase[i];
    }
  }
  KernelMatrix K(g);
  const double invw = 1.0 / K.weight;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      K.at(i, j) = cols[static_cast<size_t>(j) * n + i] * invw;
  require(all_finite(K.entries), "exact_kernel: evolution diverged");
  return K;
}

SpectralPropagator::SpectralPropagator(const Potential& V, const Grid& g,
                                       const PhysicsConfig& cfg)
    : grid(g) {
  const int n = g.n;
  // H columns: kinetic multiplier applied to identity columns, batched
  std::vector<cplx> H(static_cast<size_t>(n) * n, cplx(0));
  for (int j = 0; j < n; ++j) H[static_cast<size_t>(j) * n + j] = 1.0;
  fourier_columns(H.data(), g, cfg.convention, n, false);
  std::vector<double> kin(n);
  for (int k = 0; k < n; ++k) kin[k] = kinetic_symbol(g.xi(k, cfg.convention), cfg);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    cplx* col = H.data() + static_cast<size_t>(j) * n;
    for (int k = 0; k < n; ++k) col[k] *= kin[k];
  }
  fourier_columns(H.data(), g, cfg.convention, n, true);
  const double ps = potential_scale(cfg);
  for (int j = 0; j < n; ++j)
    H[static_cast<size_t>(j) * n + j] += ps * V.value(g.x(j));
  // columns-of-columns layout equals row-major of H^T; H is Hermitian, so
  // symmetrize into row-major storage and diagonalize.
  std::vector<cplx> A(static_cast<size_t>(n) * n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx hij = H[static_cast<size_t>(j) * n + i];  // H(i, j)
      cplx hji = std::conj(H[static_cast<size_t>(i) * n + j]);
      A[static_cast<size_t>(i) * n + j] = 0.5 * (hij + hji);
    }
  eigenvalues.resize(n);
  int info = LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'V', 'U', n,
                            reinterpret_cast<lapack_complex_double*>(A.data()), n,
                            eigenvalues.data());
  require(info == 0, "spectral propagator: eigensolver failed");
  eigenvectors = std::move(A);
}

Field SpectralPropagator::apply(const Field& f, double t) const {
  const int n = grid.n;
  // coefficients c_k = <v_k, f> (plain vector pairing), then sum e^{-i t w} c_k v_k
  std::vector<cplx> c(n, cplx(0));
  for (int i = 0; i < n; ++i) {
    const cplx* row = eigenvectors.data() + static_cast<size_t>(i) * n;
    for (int k = 0; k < n; ++k) c[k] += std::conj(row[k]) * f[i];
  }
  for (int k = 0; k < n; ++k)
    c[k] *= std::exp(cplx(0, -t * eigenvalues[k]));
  Field out(n, cplx(0));
  for (int i = 0; i < n; ++i) {
    const cplx* row = eigenvectors.data() + static_cast<size_t>(i) * n;
    cplx acc = 0;
    for (int k = 0; k < n; ++k) acc += row[k] * c[k];
    out[i] = acc;
  }
  return out;
}

KernelMatrix SpectralPropagator::kernel(double t) const {
  const int n = grid.n;
  std::vector<cplx> T(static_cast<size_t>(n) * n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      T[static_cast<size_t>(i) * n + k] =
          eigenvectors[static_cast<size_t>(i) * n + k] *
          std::exp(cplx(0, -t * eigenvalues[k]));
  KernelMatrix K(grid);
  gemm_abh(T.data(), eigenvectors.data(), K.entries.data(), n);
  const double invw = 1.0 / K.weight;
  for (auto& v : K.entries) v *= invw;
  return K;
}

}  // namespace pilab
