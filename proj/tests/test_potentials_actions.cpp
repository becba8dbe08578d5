#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "pilab/core.hpp"
#include "pilab/potential.hpp"
#include "pilab/actions.hpp"
#include "pilab/oracles.hpp"

using namespace pilab;
using cplx = std::complex<double>;

TEST_CASE("potential derivatives match central differences") {
  std::vector<Potential> fams = {
      Potential::harmonic(1.3), Potential::cosine(0.7, 1.4, 0.3),
      Potential::lorentzian_bump(0.9, 1.2), Potential::gaussian_bump(1.1, 0.8),
      Potential::cosine(0.5).plus(Potential::gaussian_bump(0.4, 1.5))};
  const double h = 1e-5;
  for (const auto& V : fams) {
    for (double x : {-1.7, -0.2, 0.9, 2.4}) {
      double fd1 = (V.value(x + h) - V.value(x - h)) / (2 * h);
      CHECK(V.deriv(1, x) == doctest::Approx(fd1).epsilon(1e-6));
      double fd2 = (V.value(x + h) - 2 * V.value(x) + V.value(x - h)) / (h * h);
      CHECK(V.deriv(2, x) == doctest::Approx(fd2).epsilon(1e-4));
    }
  }
}

TEST_CASE("boundedness flags: harmonic is the unbounded case") {
  CHECK(!Potential::harmonic().bounded());
  CHECK(Potential::cosine(1.0).bounded());
  CHECK(Potential::lorentzian_bump(1, 1).bounded());
  CHECK(Potential::gaussian_bump(1, 1).bounded());
  CHECK(Potential::zero().is_zero());
  CHECK(!Potential::cosine(1.0).plus(Potential::harmonic()).bounded());
  CHECK(Potential::cosine(1.0).plus(Potential::gaussian_bump(1, 1)).bounded());
  CHECK(!Potential::harmonic().describe().empty());
}

TEST_CASE("sum potentials add values and derivatives") {
  auto V = Potential::cosine(0.6, 1.1).plus(Potential::lorentzian_bump(0.8, 1.3));
  for (double x : {-1.0, 0.4, 2.2}) {
    CHECK(V.value(x) == doctest::Approx(Potential::cosine(0.6, 1.1).value(x) +
                                        Potential::lorentzian_bump(0.8, 1.3).value(x))
                            .epsilon(1e-14));
    CHECK(V.deriv(2, x) == doctest::Approx(Potential::cosine(0.6, 1.1).deriv(2, x) +
                                           Potential::lorentzian_bump(0.8, 1.3).deriv(2, x))
                               .epsilon(1e-14));
  }
}

TEST_CASE("subdivision bookkeeping") {
  auto om = Subdivision::uniform(0.0, 0.8, 4);
  CHECK(om.legs() == 4);
  CHECK(om.gap(0) == doctest::Approx(0.2));
  CHECK(mesh(om) == doctest::Approx(0.2));
  Subdivision bad{{0.0, 0.5, 0.4}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  Subdivision single{{0.3}};
  CHECK_THROWS_AS(single.validate(), std::invalid_argument);
}

TEST_CASE("broken-line action on a straight free polygon is d^2/2t") {
  std::vector<double> pts{-1.0, -0.25, 0.5, 1.25, 2.0};
  CHECK(broken_line_action(Potential::zero(), 0.8, pts) ==
        doctest::Approx(9.0 / 1.6).epsilon(1e-13));
  // with a potential the right-endpoint samples enter with weight t/n
  auto V = Potential::cosine(0.7);
  double manual = 9.0 / 1.6;
  for (size_t k = 1; k < pts.size(); ++k) manual -= 0.2 * V.value(pts[k]);
  CHECK(broken_line_action(V, 0.8, pts) == doctest::Approx(manual).epsilon(1e-13));
}

TEST_CASE("shooting solver reproduces the closed-form oscillator action") {
  auto Vh = Potential::harmonic();
  double worst = 0;
  for (double T : {0.3, 0.7, 1.2})
    for (double x : {-1.3, 0.4, 2.0})
      for (double y : {-0.8, 0.9}) {
        double exact = ((x * x + y * y) * std::cos(T) - 2 * x * y) / (2 * std::sin(T));
        worst = std::max(worst, std::abs(classical_action(Vh, T, 0, x, y) - exact));
      }
  CHECK(worst < 1e-6);
  // free particle: straight line, d^2/2t
  CHECK(classical_action(Potential::zero(), 0.5, 0, 1.7, -0.3) ==
        doctest::Approx(4.0 / 1.0).epsilon(1e-9));
}

TEST_CASE("conjugate point: no classical path at the oscillator half-period") {
  CHECK_THROWS_AS(classical_action(Potential::harmonic(), PI, 0, 0.5, -0.3),
                  NoClassicalPath);
}

TEST_CASE("midpoint rules have their stated closed forms") {
  auto Vh = Potential::harmonic();
  double x = 1.3, y = -0.4, tau = 0.25;
  double d2t = (x - y) * (x - y) / (2 * tau);
  CHECK(midpoint_action(Vh, MidpointRule::V1, tau, 0, x, y) ==
        doctest::Approx(d2t - tau * (Vh.value(x) + Vh.value(y)) / 2).epsilon(1e-13));
  CHECK(midpoint_action(Vh, MidpointRule::V2, tau, 0, x, y) ==
        doctest::Approx(d2t - tau * Vh.value((x + y) / 2)).epsilon(1e-13));
  // segment average of x^2/2 over the straight line is (x^2+xy+y^2)/6
  CHECK(midpoint_action(Vh, MidpointRule::Avg, tau, 0, x, y) ==
        doctest::Approx(d2t - tau * (x * x + x * y + y * y) / 6).epsilon(1e-13));
}

TEST_CASE("average rule beats endpoint and midpoint rules on the oscillator") {
  auto Vh = Potential::harmonic();
  double x = 1.3, y = -0.4, tau = 0.1;
  double S = ((x * x + y * y) * std::cos(tau) - 2 * x * y) / (2 * std::sin(tau));
  double e1 = std::abs(S - midpoint_action(Vh, MidpointRule::V1, tau, 0, x, y));
  double e2 = std::abs(S - midpoint_action(Vh, MidpointRule::V2, tau, 0, x, y));
  double ea = std::abs(S - midpoint_action(Vh, MidpointRule::Avg, tau, 0, x, y));
  CHECK(ea < e1);
  CHECK(ea < e2);
  CHECK(ea < 1e-4);  // third order in tau, vs first order for the others
}

TEST_CASE("expanded-action coefficients: oscillator closed forms") {
  auto w = hj_coefficients(Potential::harmonic(), 2, 0.5);
  double x = 1.3, y = -0.4;
  CHECK(w.w1(x, y) == doctest::Approx(-(x * x + x * y + y * y) / 6).epsilon(1e-12));
  CHECK(w.b2(x, y) == doctest::Approx(-1.0 / 12.0).epsilon(1e-12));
  // W_2 = i hbar B_2: purely imaginary counterterm
  auto w2 = w.wk(2, x, y);
  CHECK(std::abs(std::real(w2)) < 1e-14);
  CHECK(std::imag(w2) == doctest::Approx(0.5 * w.b2(x, y)).epsilon(1e-12));
  CHECK(std::abs(w.wk(1, x, y) - cplx(w.w1(x, y))) < 1e-14);
}

TEST_CASE("approx_action assembles the displayed power series") {
  auto V = Potential::cosine(1.0);
  auto w = hj_coefficients(V, 3, 0.25);
  double x = 0.7, y = 0.3, tau = 0.08;
  cplx manual = (x - y) * (x - y) / (2 * tau);
  for (int k = 1; k <= 3; ++k) manual += std::pow(tau, k) * w.wk(k, x, y);
  CHECK(std::abs(approx_action(w, tau, 0, x, y) - manual) < 1e-12);
}

TEST_CASE("modified Hamilton-Jacobi residual vanishes to the stated order") {
  auto V = Potential::cosine(1.0);
  double x = 0.7, y = 0.3;
  double prev = 1e9;
  for (int N : {1, 2, 3}) {
    auto w = hj_coefficients(V, N, 0.25);
    double r1 = std::abs(hj_residual(w, 0.05, 0, x, y));
    double r2 = std::abs(hj_residual(w, 0.025, 0, x, y));
    double ratio = r1 / r2;
    // residual ~ tau^N: halving tau divides it by about 2^N
    if (N == 1) CHECK((ratio > 1.8 && ratio < 2.3));
    if (N == 2) CHECK((ratio > 3.5 && ratio < 4.5));
    if (N == 3) CHECK((ratio > 6.5 && ratio < 12.0));
    CHECK(r2 < prev);  // each added order shrinks the residual outright
    prev = r2;
  }
}

TEST_CASE("shared Gauss-Legendre rule on [0,1] integrates high-degree polynomials") {
  const auto& gl = gauss_legendre_01();
  CHECK(gl.size() == 32);
  double sw = 0, sx = 0, s9 = 0;
  double last = -1;
  for (const auto& [node, wt] : gl) {
    CHECK(node > 0.0);
    CHECK(node < 1.0);
    CHECK(node > last);
    last = node;
    sw += wt;
    sx += wt * node;
    s9 += wt * std::pow(node, 9);
  }
  CHECK(sw == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(sx == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(s9 == doctest::Approx(0.1).epsilon(1e-13));
}
