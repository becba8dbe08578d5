#pragma once
// Reference propagators: closed-form kernels (free, harmonic, quadratic-flow),
// the split-step numerical oracle, and dense spectral propagators.
//
// Clock conventions. PDE (hbar in (0,1]): U(t) = e^{-it(hbar xi^2/2 + V/hbar)}.
// HA (hbar = 1): U(t) = e^{-it(pi xi^2 + 2 pi V)}; with this clock the harmonic
// oscillator at time theta is the phase-space rotation by theta, and the
// classical flow generator carries the 1/(2 pi) scaling.

#include <functional>

#include "pilab/kernel.hpp"
#include "pilab/potential.hpp"

namespace pilab {

struct ExceptionalTime : std::runtime_error {
  explicit ExceptionalTime(const std::string& m) : std::runtime_error(m) {}
};
struct NotFreeSymplectic : std::runtime_error {
  explicit NotFreeSymplectic(const std::string& m) : std::runtime_error(m) {}
};
struct NoClassicalPath : std::runtime_error {
  explicit NoClassicalPath(const std::string& m) : std::runtime_error(m) {}
};

struct QuadraticHamiltonian {
  // a(x, xi) = 0.5 A x^2 + B xi x + 0.5 C xi^2
  double A = 0, B = 0, C = 0;
  static QuadraticHamiltonian free_particle() { return {0, 0, 1}; }
  static QuadraticHamiltonian harmonic() { return {1, 0, 1}; }
};

struct SymplecticBlocks {
  // phase-space map (x, xi) -> (A x + B xi, C x + D xi)
  double A = 1, B = 0, C = 0, D = 1;
  double det() const { return A * D - B * C; }
};

// e^{t G} with G = [[B, C], [-A, -B]]; generator scaled by 1/(2 pi) under HA.
SymplecticBlocks classical_flow(const QuadraticHamiltonian& h, double t,
                                const PhysicsConfig& cfg);

// Sampled closed-form kernel (2 pi i hbar t)^{-1/2} e^{(i/hbar)|x-y|^2/(2t)}.
// t = 0 returns the discrete identity. PDE convention.
KernelMatrix free_kernel(const Grid& g, double t, const PhysicsConfig& cfg);

// Fourier-multiplier free evolution; works under both conventions.
Field free_propagate(const Field& f, const Grid& g, double t,
                     const PhysicsConfig& cfg);

// Harmonic-oscillator kernel, hbar = 1, PDE convention:
//   c(k) |sin t|^{-1/2} exp(i (x^2+y^2)/(2 tan t) - i x y / sin t),
//   c(k) = (2 pi)^{-1/2} e^{-i(pi/4 + k pi/2)}, k = floor(t/pi).
// The branch constant keeps the kernel continuous in t across caustics and
// matches the metaplectic normalization at t -> 0+. Throws ExceptionalTime
// when |sin t| <= 1e-6.
KernelMatrix mehler_kernel(const Grid& g, double t);

// Quadratic Fourier transform for a free symplectic block matrix (HA):
//   c_t |B|^{-1/2} e^{2 pi i Phi(x,y)},
//   Phi = 0.5 D/B x^2 - x y / B + 0.5 A/B y^2,  c_t = e^{-i pi/4 sgn(B)}.
// Throws NotFreeSymplectic when |B| <= 1e-6.
KernelMatrix metaplectic_kernel(const Grid& g, const SymplecticBlocks& blocks,
                                const PhysicsConfig& cfg);

// Strang split-step oracle: (half potential phase, kinetic, half phase)^substeps.
Field reference_propagate(const Potential& V, const Field& f, const Grid& g,
                          double t, const PhysicsConfig& cfg, int substeps);

// Materialized split-step propagator: all delta columns evolved in one batch.
KernelMatrix exact_kernel(const Potential& V, const Grid& g, double t,
                          const PhysicsConfig& cfg, int substeps);

// Dense discrete Hamiltonian H = Finv diag(kin) F + diag(pot) diagonalized once;
// exact semigroup on the grid. kin/pot follow the clock conventions above.
struct SpectralPropagator {
  Grid grid;
  std::vector<double> eigenvalues;
  std::vector<cplx> eigenvectors;  // row-major; column k = k-th eigenvector

  SpectralPropagator(const Potential& V, const Grid& g, const PhysicsConfig& cfg);
  Field apply(const Field& f, double t) const;
  KernelMatrix kernel(double t) const;  // unitary matrix / weight
};

}  // namespace pilab
