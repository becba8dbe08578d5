#pragma once
// Centered-grid Fourier transforms under both phase conventions, plus the
// Fourier-multiplier machinery (Bessel weights, spectral translation) and
// weighted L^p norms.

#include "pilab/core.hpp"

namespace pilab {

// Unitary transform onto the centered dual grid. The continuum conventions:
//   PDE: F f(xi) = (2pi)^{-1/2} \int f(x) e^{-i x xi} dx
//   HA:  F f(xi) = \int f(x) e^{-2 pi i x xi} dx
// realized by a phase-twisted FFT (both grids centered, half-open).
Field fourier(const Field& f, const Grid& g, Convention conv);
Field fourier_inv(const Field& F, const Grid& g, Convention conv);

// Apply a frequency-side multiplier m(xi): f -> Finv[ m . F f ].
Field apply_multiplier(const Field& f, const Grid& g, Convention conv,
                       const std::vector<cplx>& symbol);

// Bessel multiplier with symbol (1 + hbar |xi|^2)^{k/2} (PDE) or
// (1 + 4 pi^2 hbar xi^2)^{k/2} (HA) -- the same operator (1 - hbar Lap)^{k/2}
// expressed on each convention's frequency axis.
Field bessel_multiplier(const Field& f, const Grid& g, double k,
                        const PhysicsConfig& cfg);

// Quadrature L^p norm of bessel_multiplier(f, k); k = 0 is the plain L^p norm.
// p = infinity is max modulus.
double field_norm(const Field& f, const Grid& g, double p, double k,
                  const PhysicsConfig& cfg);

inline double field_norm(const Field& f, const Grid& g, double p) {
  return field_norm(f, g, p, 0.0, PhysicsConfig{});
}

}  // namespace pilab
