#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdint>

#include "pilab/core.hpp"
#include "pilab/kernel.hpp"
#include "pilab/oracles.hpp"

using namespace pilab;
using cplx = std::complex<double>;

namespace {

double splitmix(uint64_t& s) {
  s += 0x9e3779b97f4a7c15ull;
  uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z = z ^ (z >> 31);
  return static_cast<double>(z >> 11) / 9007199254740992.0 - 0.5;
}

KernelMatrix random_kernel(const Grid& g, uint64_t seed) {
  KernelMatrix K(g);
  for (auto& e : K.entries) e = cplx(splitmix(seed), splitmix(seed));
  return K;
}

double entry_gap(const KernelMatrix& A, const KernelMatrix& B) {
  double m = 0;
  for (size_t i = 0; i < A.entries.size(); ++i)
    m = std::max(m, std::abs(A.entries[i] - B.entries[i]));
  return m;
}

}  // namespace

TEST_CASE("matmul backends agree on random kernels") {
  Grid g(128, 6.0);
  auto A = random_kernel(g, 7);
  auto B = random_kernel(g, 91);
  auto Cs = kernel_compose(A, B, MatmulBackend::Serial);
  auto Co = kernel_compose(A, B, MatmulBackend::OpenMP);
  auto Cb = kernel_compose(A, B, MatmulBackend::Blas);
  CHECK(entry_gap(Cs, Co) < 1e-14);
  CHECK(entry_gap(Cs, Cb) < 1e-12);
}

TEST_CASE("identity kernel acts as the identity and has operator norm 1") {
  Grid g(128, 6.0);
  auto I = KernelMatrix::identity(g);
  PhysicsConfig pc;
  auto f = gaussian_packet(g, 0.4, 0.9, 1.0, pc.convention);
  auto out = I.apply(f);
  double err = 0;
  for (size_t i = 0; i < f.size(); ++i) err = std::max(err, std::abs(out[i] - f[i]));
  CHECK(err < 1e-13);
  CHECK(operator_norm(I) == doctest::Approx(1.0).epsilon(1e-9));
  // scaling scales the norm
  auto J = I;
  for (auto& e : J.entries) e *= 2.0;
  CHECK(operator_norm(J) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("composition with the identity is a no-op") {
  Grid g(96, 5.0);
  auto A = random_kernel(g, 3);
  auto I = KernelMatrix::identity(g);
  CHECK(entry_gap(kernel_compose(A, I), A) < 1e-12);
  CHECK(entry_gap(kernel_compose(I, A), A) < 1e-12);
}

TEST_CASE("binary powering matches repeated composition") {
  Grid g(96, 5.0);
  auto A = random_kernel(g, 17);
  // tame the spectral radius so powers stay finite
  for (auto& e : A.entries) e *= 0.05;
  auto P3 = kernel_power(A, 3);
  auto R3 = kernel_compose(A, kernel_compose(A, A));
  CHECK(entry_gap(P3, R3) < 1e-12);
  CHECK(entry_gap(kernel_power(A, 1), A) == 0.0);
}

TEST_CASE("distance_opnorm is zero on equal kernels and detects perturbations") {
  Grid g(96, 5.0);
  auto A = random_kernel(g, 29);
  CHECK(distance_opnorm(A, A) < 1e-12);
  auto B = A;
  B.entries[10] += 0.5;
  CHECK(distance_opnorm(A, B) > 1e-3);
}

TEST_CASE("kernel_from_operator materializes a Fourier multiplier faithfully") {
  Grid g(128, 6.0);
  PhysicsConfig pc;
  auto K = kernel_from_operator(
      [&](const Field& f) { return free_propagate(f, g, 0.3, pc); }, g);
  auto f0 = gaussian_packet(g, 0.4, 0.8, 1.0, pc.convention);
  auto viaK = K.apply(f0);
  auto direct = free_propagate(f0, g, 0.3, pc);
  double err = 0;
  for (size_t i = 0; i < viaK.size(); ++i) err = std::max(err, std::abs(viaK[i] - direct[i]));
  CHECK(err < 1e-12);
  // the materialized evolution is unitary on the grid
  CHECK(operator_norm(K) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("composition requires matching grids") {
  Grid g1(64, 4.0), g2(64, 5.0);
  KernelMatrix A(g1), B(g2);
  CHECK_THROWS_AS(kernel_compose(A, B), std::invalid_argument);
}

TEST_CASE("quadrature weight equals the grid spacing") {
  Grid g(64, 4.0);
  KernelMatrix K(g);
  CHECK(K.weight == doctest::Approx(g.dx()));
  // apply uses the weight: constant kernel integrates the field
  for (auto& e : K.entries) e = 1.0;
  Field ones(g.n, cplx(1));
  auto out = K.apply(ones);
  CHECK(std::abs(out[0] - cplx(g.n * g.dx())) < 1e-10);
}
