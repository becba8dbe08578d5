#pragma once
// Measurement machinery: log-log rate fits, windowed pointwise kernel reports,
// L^p boundedness probes, hbar sweeps, and the standard test-field families.

#include <functional>
#include <string>

#include "pilab/core.hpp"
#include "pilab/kernel.hpp"

namespace pilab {

struct RateReport {
  std::vector<double> meshes;  // points used by the fit (after any drop)
  std::vector<double> errors;
  double slope = 0;      // d log(error) / d log(mesh)
  double intercept = 0;  // log-log intercept
  double residual = 0;   // rms residual in log space
  bool dropped_coarsest = false;
  std::string note;
};

// Least-squares slope of log(error) vs log(mesh). Needs >= 3 positive points.
// If the rms residual exceeds 0.1 and at least 4 points are available, the
// coarsest (largest-mesh) point is dropped once and the drop is recorded:
// coarse meshes sit outside the asymptotic regime the theorems speak about.
RateReport rate_fit(const std::vector<double>& meshes,
                    const std::vector<double>& errors);

struct WindowReport {
  double window_lo = 0, window_hi = 0;
  std::vector<int> labels;         // caller-supplied index per kernel (e.g. n)
  std::vector<double> sup_errors;  // windowed sup |e_n - u| per kernel
  std::vector<double> sup_values;  // windowed sup |e_n| (boundedness proxy)
  double proxy_spread = 0;         // max/min of sup_values
};

// Entrywise sup distance to the oracle kernel over a window box, per kernel,
// plus the uniform-boundedness proxy sup|e_n|. The window must sit inside the
// grid; the two-argument overload uses the central half of the box (boundary
// wrap pollutes kernel corners).
WindowReport pointwise_report(const std::vector<KernelMatrix>& approx,
                              const std::vector<int>& labels,
                              const KernelMatrix& oracle, double window_lo,
                              double window_hi);
WindowReport pointwise_report(const std::vector<KernelMatrix>& approx,
                              const std::vector<int>& labels,
                              const KernelMatrix& oracle);

struct RatioTable {
  std::vector<double> labels;  // family parameter per surviving member
  std::vector<double> ratios;
  double max_ratio = 0;
  double growth = 0;  // last surviving ratio / first surviving ratio
  std::string note;   // records skipped members
};

// Per-field ratios ||apply(f)||_p / ||f||_{p,k}, the denominator carrying the
// Bessel weight (1 - hbar Lap)^{k/2}. Zero-norm members are skipped with a
// note. p must lie in (1, inf).
RatioTable lp_probe(const std::function<Field(const Field&)>& apply, double p,
                    double k, const std::vector<Field>& family,
                    const std::vector<double>& labels, const Grid& g,
                    const PhysicsConfig& cfg);

// Ratios ||F f||_{p,k2} / ||f||_{p,k1} over a family; probes at which Sobolev
// weight the Fourier transform becomes L^p-bounded.
RatioTable fourier_sharpness_probe(double p, double k1, double k2,
                                   const std::vector<Field>& family,
                                   const std::vector<double>& labels,
                                   const Grid& g, const PhysicsConfig& cfg);

struct HbarSweep {
  std::vector<double> hbars;
  std::vector<RateReport> reports;
  double slope_min = 0, slope_max = 0;
  double matched_error_spread = 0;  // max/min of finest-mesh errors across hbar
};

// One rate experiment per hbar (the runner is expected to scale its horizon
// with hbar so meshes are matched in scaled units); summarizes the spread of
// fitted slopes and of matched-mesh error magnitudes.
HbarSweep hbar_sweep(const std::vector<double>& hbars,
                     const std::function<RateReport(double)>& run);

// Fixed Gaussian packet family used by operator-distance cross-checks; the
// narrow variant suits hbar-scaled testbeds.
std::vector<Field> gaussian_family(const Grid& g, Convention conv,
                                   bool narrow = false);

// max over the packet family of ||(K1 - K2) f||_2 / ||f||_2. Cross-check of
// distance_opnorm that is blind to grid-corner artifacts.
double family_distance(const KernelMatrix& K1, const KernelMatrix& K2,
                       Convention conv, bool narrow = false);

// 20-field suite exercising norm equivalence: packets, Hermite-like fields, a
// chirp, a two-bump interference state, and slow-decay outliers. Modulation
// phases follow the 2 pi convention.
std::vector<Field> norm_test_suite(const Grid& g);

}  // namespace pilab
