#pragma once
// Approximation operators built from short-time action rules: single-slice
// parametrix kernels, their composition over a subdivision, and Trotter
// products of a quadratic oracle step with a bounded potential phase.

#include <string>

#include "pilab/actions.hpp"
#include "pilab/kernel.hpp"
#include "pilab/oracles.hpp"

namespace pilab {

enum class ActionModelKind {
  ExactFree,
  ExactHarmonic,
  BrokenLine,
  ClassicalBvp,
  MidpointV1,
  MidpointV2,
  MidpointAvg,
  Taylor1,
  Taylor2,
  Taylor3,
};

struct ActionModel {
  ActionModelKind kind = ActionModelKind::ExactFree;
  Potential potential;  // ignored by the two exact models
  int legs = 1;         // polygon legs per slice (broken_line only)

  // names: exact_free, exact_harmonic, broken_line, classical_bvp,
  // midpoint_v1, midpoint_v2, midpoint_avg, taylor1, taylor2, taylor3
  static ActionModel from_name(const std::string& name, const Potential& V,
                               int legs = 1);
  const char* name() const;
  int taylor_order() const;  // 0 when not a taylor model
};

// Grid-pair caches of the hbar-free coefficient fields W_1, B_2, C_30, C_32
// (filled up to the series order); they depend only on the potential and the
// grid, so one cache serves every gap, order and hbar.
struct WFields {
  int order = 0;
  std::vector<double> w1, b2, c30, c32;  // row-major (x_i, y_j)
};
WFields wseries_fields(const WSeries& w, const Grid& g);

// S_model(tau, x, y) - |x-y|^2/(2 tau): the potential part of the slice
// action (complex for taylor models).
cplx model_action_diff(const ActionModel& m, double tau, double x, double y,
                       double hbar);
// Full model action, free part included.
cplx model_action(const ActionModel& m, double tau, double x, double y,
                  double hbar);

// Two grid realizations of the same slice operator.
//   Sampled:     entries (2 pi i hbar tau)^{-1/2} e^{(i/hbar) S_model} taken
//                pointwise; faithful to the closed form but carries the
//                sampling artifacts of a pure chirp.
//   BandLimited: the multiplier-built free propagator Hadamard-multiplied by
//                e^{(i/hbar)(S_model - S_free)}; acts on band-limited fields
//                exactly like the sampled kernel and collapses to the free
//                propagator without error when V = 0, so compositions and
//                operator-distance studies use it by default.
enum class Realization { Sampled, BandLimited };

KernelMatrix parametrix_kernel(const ActionModel& m, const Grid& g, double t,
                               double s, const PhysicsConfig& cfg,
                               Realization realization = Realization::Sampled,
                               const WFields* fields = nullptr);

KernelMatrix compose_over_subdivision(
    const ActionModel& m, const Grid& g, const Subdivision& omega,
    const PhysicsConfig& cfg,
    Realization realization = Realization::BandLimited);

// (quadratic oracle step * diagonal potential phase)^n. h0 selects the step
// family: free_particle() -> Fourier multiplier, harmonic() -> dense spectral
// propagator (built internally unless a prebuilt one is supplied). V must be
// bounded. Throws ExceptionalTime when the step time lands on a vanishing
// B block of the quantum flow.
KernelMatrix trotter_approx(const Potential& V, const QuadraticHamiltonian& h0,
                            const Grid& g, double t, int n,
                            const PhysicsConfig& cfg,
                            const SpectralPropagator* quad_step = nullptr);

}  // namespace pilab
