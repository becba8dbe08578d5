#pragma once
// Time-frequency toolkit: phase-space shifts, short-time Fourier transforms,
// Gabor frames and modulation norms (three routes), the Wigner distribution,
// and Gabor-matrix decay diagnostics for operators.

#include <functional>
#include <string>

#include "pilab/fourier.hpp"
#include "pilab/kernel.hpp"

namespace pilab {

struct PhasePoint {
  double x = 0, xi = 0;
};

struct GaborSystem {
  Field window;
  double alpha = 1, beta = 1;  // lattice steps in position / frequency
};

// Modulation-then-translation phase-space shift; the translation runs through
// the Fourier side so off-grid shifts stay unitary. Shifts outside the grid's
// phase-space box are rejected (wraparound would corrupt norms).
Field tf_shift(const Field& g, const Grid& grid, PhasePoint z,
               const PhysicsConfig& cfg);

// L2-normalized Hermite window of index k (k = 0 is the standard Gaussian
// 2^{1/4} e^{-pi x^2} under the HA normalization used throughout this module).
Field hermite_window(const Grid& grid, int k);

struct STFTGrid {
  std::vector<double> xs;   // position lattice values
  std::vector<double> xis;  // frequency lattice values
  std::vector<cplx> values; // row-major: values[i * xis.size() + k]
  cplx at(size_t i, size_t k) const { return values[i * xis.size() + k]; }
};

// Values <f, pi(x, xi) g> on the lattice {(m alpha, n beta)} clipped to the
// phase-space box. Grid-aligned lattices go through batched FFTs; others fall
// back to direct pairings against shifted windows.
STFTGrid stft(const Field& f, const Field& g, const Grid& grid, double alpha,
              double beta, const PhysicsConfig& cfg);

enum class NormMethod { Stft, Gabor, FreqDecomp };

struct NormResult {
  double value = 0;
  bool frame_warning = false;  // gabor method on a system of density >= 1
  std::string note;
};

// Weighted mixed norm of f in the modulation scale with integrability (p, q)
// and weight <xi>^s, by one of three routes: continuous STFT mixed norm on
// the full grid lattice, Gabor lattice sum, or frequency-decomposition sum
// over smooth unit bumps. p or q may be infinity.
NormResult modulation_norm(const Field& f, const Grid& grid, double p, double q,
                           double s, NormMethod method, const GaborSystem& sys,
                           const PhysicsConfig& cfg);

// Extreme eigenvalues of the frame operator S = sum_z <., pi(z) w> pi(z) w
// assembled over the system's lattice on the grid.
struct FrameBounds {
  double A = 0, B = 0;
};
FrameBounds frame_bounds(const GaborSystem& sys, const Grid& grid,
                         const PhysicsConfig& cfg);

// sum over the system lattice of |<f, pi(z) w>|^2 (the frame sandwich's
// middle term), computed independently of frame_bounds.
double frame_energy(const Field& f, const GaborSystem& sys, const Grid& grid,
                    const PhysicsConfig& cfg);

// Cross-Wigner transform W(f,g)(x, xi) = int e^{-2 pi i y xi}
// f(x + y/2) conj(g(x - y/2)) dy on the x-grid times the half-resolution
// frequency grid. HA convention only.
struct PhaseField {
  Grid x_grid;
  std::vector<double> xis;
  std::vector<cplx> values;  // row-major values[i * xis.size() + k]
  cplx at(size_t i, size_t k) const { return values[i * xis.size() + k]; }
};
PhaseField wigner(const Field& f, const Field& g, const Grid& grid,
                  const PhysicsConfig& cfg);

struct GaborMatrixSample {
  PhasePoint z, w;
  double magnitude = 0;  // |<T pi(z) g, pi(w) g>|
};

std::vector<GaborMatrixSample> gabor_matrix(const KernelMatrix& T,
                                            const Field& window,
                                            const std::vector<PhasePoint>& zs,
                                            const std::vector<PhasePoint>& ws,
                                            const PhysicsConfig& cfg);

// Phase-space map used as the expected propagation graph in decay fits.
struct CanonicalMap {
  std::string label;
  std::function<PhasePoint(PhasePoint)> map;

  static CanonicalMap identity();
  static CanonicalMap free_flow(double t);   // (x, xi) -> (x + t xi, xi)
  static CanonicalMap rotation(double theta);
};

struct FioDecayReport {
  std::vector<double> s_values;
  std::vector<double> seminorms;  // sup <w - chi(z)>^s |M| per s (sample sup)
  double decay_exponent = 0;      // least-squares slope of -log M vs log<d>
  int fitted_samples = 0;
};

// Per-s seminorm estimates over the sample cloud plus an empirical decay
// exponent of the Gabor matrix against the distance to the graph of chi.
// Magnitudes below 1e-11 are floored before the log fit.
FioDecayReport fio_decay_fit(const std::vector<GaborMatrixSample>& samples,
                             const CanonicalMap& chi,
                             const std::vector<double>& s_grid);

}  // namespace pilab
