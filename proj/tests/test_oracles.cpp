#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "pilab/core.hpp"
#include "pilab/fourier.hpp"
#include "pilab/kernel.hpp"
#include "pilab/oracles.hpp"
#include "pilab/potential.hpp"

using namespace pilab;

namespace {

double kernel_entry_distance(const KernelMatrix& a, const KernelMatrix& b) {
  REQUIRE(a.entries.size() == b.entries.size());
  double worst = 0;
  for (std::size_t i = 0; i < a.entries.size(); ++i)
    worst = std::max(worst, std::abs(a.entries[i] - b.entries[i]));
  return worst;
}

double field_distance(const Field& a, const Field& b, const Grid& g) {
  Field d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return l2_norm(d, g);
}

// Worst L2 error over a spread of Gaussian packets; this is the metric that
// makes sense for sampled chirp kernels, which only represent the operator on
// band-limited data.
double packet_family_distance(const Grid& g, const PhysicsConfig& cfg,
                              const std::function<Field(const Field&)>& approx,
                              const std::function<Field(const Field&)>& exact) {
  double worst = 0;
  for (double x0 : {-2.0, 0.0, 1.5})
    for (double xi0 : {-1.0, 0.0, 2.0}) {
      Field f = gaussian_packet(g, x0, 1.0, xi0, cfg.convention);
      worst = std::max(worst, field_distance(approx(f), exact(f), g));
    }
  return worst;
}

}  // namespace

TEST_CASE("free kernel matches the closed form entrywise") {
  Grid g(256, 10.0);
  PhysicsConfig cfg;
  double t = 0.4;
  KernelMatrix K = free_kernel(g, t, cfg);
  // (2 pi i t)^{-1/2} e^{i (x-y)^2 / (2 t)} with the -pi/4 branch for t > 0
  double x = g.x(70), y = g.x(130);
  double d2 = (x - y) * (x - y);
  cplx expected = std::polar(1.0 / std::sqrt(2.0 * PI * t),
                             d2 / (2.0 * t) - PI / 4.0);
  CHECK(std::abs(K.at(70, 130) - expected) < 1e-14);

  KernelMatrix I = free_kernel(g, 0.0, cfg);
  CHECK(kernel_entry_distance(I, KernelMatrix::identity(g)) == 0.0);
}

TEST_CASE("free kernel agrees with the Fourier multiplier on packets") {
  Grid g(512, 12.0);
  PhysicsConfig cfg;
  double t = 0.5;
  KernelMatrix K = free_kernel(g, t, cfg);
  double worst = packet_family_distance(
      g, cfg, [&](const Field& f) { return K.apply(f); },
      [&](const Field& f) { return free_propagate(f, g, t, cfg); });
  CHECK(worst < 1e-9);  // measured 5.6e-14 on this grid
}

TEST_CASE("free kernels compose like a group on band-limited data") {
  Grid g(512, 12.0);
  PhysicsConfig cfg;
  KernelMatrix K03 = free_kernel(g, 0.3, cfg);
  KernelMatrix K02 = free_kernel(g, 0.2, cfg);
  KernelMatrix K05 = free_kernel(g, 0.5, cfg);
  KernelMatrix prod = kernel_compose(K03, K02);
  double worst = packet_family_distance(
      g, cfg, [&](const Field& f) { return prod.apply(f); },
      [&](const Field& f) { return K05.apply(f); });
  CHECK(worst < 1e-6);  // measured 7.8e-09
}

TEST_CASE("free propagation is unitary and invertible under both conventions") {
  Grid g(256, 8.0);
  for (Convention conv : {Convention::PDE, Convention::HA}) {
    PhysicsConfig cfg;
    cfg.convention = conv;
    Field f = gaussian_packet(g, 0.7, 0.9, -1.3, cfg.convention);
    Field fwd = free_propagate(f, g, 0.6, cfg);
    CHECK(l2_norm(fwd, g) == doctest::Approx(1.0).epsilon(1e-12));
    Field back = free_propagate(fwd, g, -0.6, cfg);
    CHECK(field_distance(back, f, g) < 1e-12);
  }
}

TEST_CASE("harmonic kernel matches the explicit Mehler expression") {
  Grid g(256, 10.0);
  double t = 0.7;
  KernelMatrix K = mehler_kernel(g, t);
  double x = g.x(100), y = g.x(150);
  double s = std::sin(t), c = std::cos(t);
  cplx expected = std::polar(1.0 / std::sqrt(2.0 * PI * std::abs(s)),
                             (x * x + y * y) * c / (2.0 * s) - x * y / s -
                                 PI / 4.0);
  CHECK(std::abs(K.at(100, 150) - expected) < 1e-14);
}

TEST_CASE("harmonic kernels compose like a group within a branch") {
  Grid g(512, 12.0);
  PhysicsConfig cfg;
  KernelMatrix K04 = mehler_kernel(g, 0.4);
  KernelMatrix K03 = mehler_kernel(g, 0.3);
  KernelMatrix K07 = mehler_kernel(g, 0.7);
  KernelMatrix prod = kernel_compose(K04, K03);
  double worst = packet_family_distance(
      g, cfg, [&](const Field& f) { return prod.apply(f); },
      [&](const Field& f) { return K07.apply(f); });
  CHECK(worst < 1e-6);  // measured 1.9e-09
}

TEST_CASE("harmonic kernel branch constant: reflection across one caustic") {
  // u(pi + s)(x, y) = e^{-i pi/2} u(s)(-x, y), checked without any grid
  // operator products: -x(i) = x(n - i) for i >= 1 on the centered grid.
  Grid g(256, 10.0);
  double s = 0.6;
  KernelMatrix shifted = mehler_kernel(g, PI + s);
  KernelMatrix base = mehler_kernel(g, s);
  cplx phase = std::polar(1.0, -PI / 2.0);
  double worst = 0;
  for (int i = 1; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      worst = std::max(worst,
                       std::abs(shifted.at(i, j) - phase * base.at(g.n - i, j)));
  CHECK(worst < 1e-10);  // measured 9.1e-14
}

TEST_CASE("harmonic kernel branch constant: full period flips the sign") {
  Grid g(256, 10.0);
  double s = 0.6;
  KernelMatrix shifted = mehler_kernel(g, 2.0 * PI + s);
  KernelMatrix base = mehler_kernel(g, s);
  double worst = 0;
  for (std::size_t i = 0; i < base.entries.size(); ++i)
    worst = std::max(worst, std::abs(shifted.entries[i] + base.entries[i]));
  CHECK(worst < 1e-10);  // measured 3.7e-14
}

TEST_CASE("harmonic kernel refuses exceptional times near k pi") {
  Grid g(64, 6.0);
  CHECK_THROWS_AS(mehler_kernel(g, PI), ExceptionalTime);
  CHECK_THROWS_AS(mehler_kernel(g, 2.0 * PI), ExceptionalTime);
  CHECK_THROWS_AS(mehler_kernel(g, 1e-7), ExceptionalTime);
  CHECK_THROWS_WITH(mehler_kernel(g, PI),
                    doctest::Contains("degenerates near t = k pi"));
}

TEST_CASE("split-step oracle self-converges at fourth order in the substep") {
  // Strang splitting is second order in the substep length; halving the
  // substep count ratio 4 shows up directly in the self-convergence errors.
  Grid g(256, 12.0);
  PhysicsConfig cfg;
  Potential V = Potential::harmonic(1.0).plus(Potential::cosine(0.3));
  Field f = gaussian_packet(g, 0.5, 1.0, 1.0, cfg.convention);
  double t = 0.7;
  Field ref = reference_propagate(V, f, g, t, cfg, 8192);
  double e256 = field_distance(reference_propagate(V, f, g, t, cfg, 256), ref, g);
  double e512 = field_distance(reference_propagate(V, f, g, t, cfg, 512), ref, g);
  double e1024 = field_distance(reference_propagate(V, f, g, t, cfg, 1024), ref, g);
  CHECK(e256 / e512 == doctest::Approx(4.0).epsilon(0.15));
  CHECK(e512 / e1024 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("split-step oracle reproduces the Mehler kernel") {
  Grid g(512, 12.0);
  PhysicsConfig cfg;
  KernelMatrix K = mehler_kernel(g, 0.7);
  double worst = packet_family_distance(
      g, cfg, [&](const Field& f) { return K.apply(f); },
      [&](const Field& f) {
        return reference_propagate(Potential::harmonic(1.0), f, g, 0.7, cfg, 2048);
      });
  CHECK(worst < 1e-7);
}

TEST_CASE("materialized split-step kernel is unitary") {
  Grid g(256, 12.0);
  PhysicsConfig cfg;
  KernelMatrix K = exact_kernel(Potential::harmonic(1.0), g, 0.5, cfg, 256);
  // K^* K should be the identity kernel: columns of a unitary matrix.
  KernelMatrix Kh = K;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) Kh.at(i, j) = std::conj(K.at(j, i));
  double worst = distance_opnorm(kernel_compose(Kh, K), KernelMatrix::identity(g));
  CHECK(worst < 1e-10);  // measured 7.0e-14
}

TEST_CASE("classical flow blocks for the free particle and the oscillator") {
  PhysicsConfig pde;
  SymplecticBlocks Ffree = classical_flow(QuadraticHamiltonian::free_particle(), 0.7, pde);
  CHECK(Ffree.A == 1.0);
  CHECK(Ffree.B == 0.7);
  CHECK(Ffree.C == 0.0);
  CHECK(Ffree.D == 1.0);

  SymplecticBlocks Fh = classical_flow(QuadraticHamiltonian::harmonic(), 0.7, pde);
  CHECK(Fh.A == doctest::Approx(std::cos(0.7)).epsilon(1e-12));
  CHECK(Fh.B == doctest::Approx(std::sin(0.7)).epsilon(1e-12));
  CHECK(Fh.C == doctest::Approx(-std::sin(0.7)).epsilon(1e-12));
  CHECK(Fh.D == doctest::Approx(std::cos(0.7)).epsilon(1e-12));
  CHECK(Fh.det() == doctest::Approx(1.0).epsilon(1e-12));

  // Under the 2 pi phase normalization the generator carries 1/(2 pi): the
  // HA flow at time 2 pi t equals the PDE flow at time t.
  PhysicsConfig ha;
  ha.convention = Convention::HA;
  SymplecticBlocks Fha = classical_flow(QuadraticHamiltonian::harmonic(), 2.0 * PI * 0.7, ha);
  CHECK(Fha.A == doctest::Approx(Fh.A).epsilon(1e-12));
  CHECK(Fha.B == doctest::Approx(Fh.B).epsilon(1e-12));
}

TEST_CASE("metaplectic kernel rejects bad inputs") {
  Grid g(64, 6.0);
  PhysicsConfig pde;
  PhysicsConfig ha;
  ha.convention = Convention::HA;
  SymplecticBlocks rot{std::cos(0.5), std::sin(0.5), -std::sin(0.5), std::cos(0.5)};
  CHECK_THROWS_AS(metaplectic_kernel(g, rot, pde), std::invalid_argument);

  SymplecticBlocks identity{};  // B = 0: kernel is a delta, not a function
  CHECK_THROWS_AS(metaplectic_kernel(g, identity, ha), NotFreeSymplectic);
  CHECK_THROWS_WITH(metaplectic_kernel(g, identity, ha),
                    doctest::Contains("block B is singular"));

  SymplecticBlocks squash{2.0, 1.0, 0.0, 2.0};  // det = 4
  CHECK_THROWS_AS(metaplectic_kernel(g, squash, ha), std::invalid_argument);
}

TEST_CASE("metaplectic rotation kernel matches Mehler through the dilation") {
  // With U_HA(t) = D_lambda U_PDE(t / 2 pi) D_lambda^{-1}, lambda = sqrt(2 pi),
  // the kernels obey u_HA(x, y) = lambda u_PDE(lambda x, lambda y).
  double lambda = std::sqrt(2.0 * PI);
  Grid gH(256, 3.0);
  Grid gP(256, 3.0 * lambda);
  PhysicsConfig ha;
  ha.convention = Convention::HA;

  for (double theta : {0.6, PI / 2.0}) {
    SymplecticBlocks rot = classical_flow(QuadraticHamiltonian::harmonic(),
                                          2.0 * PI * theta, ha);
    KernelMatrix M = metaplectic_kernel(gH, rot, ha);
    KernelMatrix Meh = mehler_kernel(gP, theta);
    double worst_mod = 0, worst_entry = 0;
    for (int i = 0; i < gH.n; ++i)
      for (int j = 0; j < gH.n; ++j) {
        cplx want = lambda * Meh.at(i, j);
        worst_mod = std::max(worst_mod,
                             std::abs(std::abs(M.at(i, j)) - std::abs(want)));
        worst_entry = std::max(worst_entry, std::abs(M.at(i, j) - want));
      }
    CHECK(worst_mod < 1e-12);    // measured 6.7e-16
    CHECK(worst_entry < 1e-10);  // measured 1.1e-13
  }
}

TEST_CASE("metaplectic free-flow kernel matches the free kernel through the dilation") {
  double lambda = std::sqrt(2.0 * PI);
  Grid gH(256, 3.0);
  Grid gP(256, 3.0 * lambda);
  PhysicsConfig ha;
  ha.convention = Convention::HA;
  PhysicsConfig pde;

  SymplecticBlocks flow = classical_flow(QuadraticHamiltonian::free_particle(),
                                         2.0 * PI * 0.5, ha);
  KernelMatrix M = metaplectic_kernel(gH, flow, ha);
  KernelMatrix F = free_kernel(gP, 0.5, pde);
  double worst = 0;
  for (int i = 0; i < gH.n; ++i)
    for (int j = 0; j < gH.n; ++j)
      worst = std::max(worst, std::abs(M.at(i, j) - lambda * F.at(i, j)));
  CHECK(worst < 1e-10);  // measured 8.1e-14
}

TEST_CASE("spectral propagator is unitary and matches the Mehler kernel") {
  Grid g(256, 12.0);
  PhysicsConfig cfg;
  SpectralPropagator sp(Potential::harmonic(1.0), g, cfg);

  Field f = gaussian_packet(g, 0.4, 1.1, -0.8, cfg.convention);
  Field u = sp.apply(f, 0.9);
  CHECK(l2_norm(u, g) == doctest::Approx(1.0).epsilon(1e-12));

  // semigroup property
  Field two_step = sp.apply(sp.apply(f, 0.4), 0.5);
  CHECK(field_distance(two_step, u, g) < 1e-12);

  // kernel() applies the same operator
  Field via_kernel = sp.kernel(0.9).apply(f);
  CHECK(field_distance(via_kernel, u, g) < 1e-12);

  KernelMatrix Meh = mehler_kernel(g, 0.7);
  double worst = packet_family_distance(
      g, cfg, [&](const Field& h) { return sp.apply(h, 0.7); },
      [&](const Field& h) { return Meh.apply(h); });
  CHECK(worst < 1e-10);  // measured 1.4e-13
}

TEST_CASE("spectral propagator against the split-step oracle for a mixed potential") {
  Grid g(256, 12.0);
  PhysicsConfig cfg;
  Potential V = Potential::harmonic(1.0).plus(Potential::cosine(0.3));
  SpectralPropagator sp(V, g, cfg);
  Field f = gaussian_packet(g, 0.3, 1.0, 0.9, cfg.convention);
  Field a = sp.apply(f, 0.7);
  Field b = reference_propagate(V, f, g, 0.7, cfg, 4096);
  CHECK(field_distance(a, b, g) < 1e-8);
}
