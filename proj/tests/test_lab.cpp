#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "pilab/core.hpp"
#include "pilab/fourier.hpp"
#include "pilab/kernel.hpp"
#include "pilab/lab.hpp"
#include "pilab/oracles.hpp"

using namespace pilab;

TEST_CASE("rate fit recovers a clean power law") {
  std::vector<double> meshes{0.4, 0.2, 0.1, 0.05};
  std::vector<double> errors;
  for (double m : meshes) errors.push_back(3.0 * m * m);
  RateReport r = rate_fit(meshes, errors);
  CHECK(r.slope == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.residual < 1e-12);
  CHECK_FALSE(r.dropped_coarsest);
  CHECK(r.meshes.size() == 4);
}

TEST_CASE("rate fit of mesh-independent errors is flat") {
  std::vector<double> meshes{0.4, 0.2, 0.1};
  std::vector<double> errors{0.7, 0.7, 0.7};
  RateReport r = rate_fit(meshes, errors);
  CHECK(r.slope == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("rate fit drops a pre-asymptotic coarsest point") {
  // clean quadratic on the three fine meshes, wildly off on the coarsest
  std::vector<double> meshes{8.0, 4.0, 2.0, 1.0};
  std::vector<double> errors{300.0, 16.0, 4.0, 1.0};
  RateReport r = rate_fit(meshes, errors);
  CHECK(r.dropped_coarsest);
  CHECK_FALSE(r.note.empty());
  CHECK(r.meshes.size() == 3);
  CHECK(r.slope == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("rate fit rejects underdetermined input") {
  CHECK_THROWS_WITH(rate_fit({0.2, 0.1}, {1.0, 0.5}),
                    doctest::Contains("need at least 3 points"));
  CHECK_THROWS_AS(rate_fit({0.2, 0.1, 0.05}, {1.0, 0.0, 0.5}),
                  std::invalid_argument);
}

TEST_CASE("lp probe at p = 2 sees unitarity exactly") {
  Grid g(256, 12.0);
  PhysicsConfig cfg;
  std::vector<Field> fam;
  std::vector<double> lbl;
  for (double xi0 : {0.0, 2.0, 4.0}) {
    fam.push_back(gaussian_packet(g, 0, 1, xi0, cfg.convention));
    lbl.push_back(xi0);
  }
  auto apply = [&](const Field& u) { return free_propagate(u, g, 1.0, cfg); };
  RatioTable rt = lp_probe(apply, 2, 0, fam, lbl, g, cfg);
  REQUIRE(rt.ratios.size() == 3);
  for (double r : rt.ratios) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rt.growth == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lp probe separates plain and weighted denominators on modulations") {
  Grid g(512, 16.0);
  PhysicsConfig cfg;
  std::vector<Field> fam;
  std::vector<double> lbl;
  for (double xi0 : {0.0, 4.0, 8.0, 16.0}) {
    fam.push_back(gaussian_packet(g, 0, 1, xi0, cfg.convention));
    lbl.push_back(xi0);
  }
  auto apply = [&](const Field& u) { return free_propagate(u, g, 1.0, cfg); };
  RatioTable k0 = lp_probe(apply, 4, 0, fam, lbl, g, cfg);
  RatioTable k5 = lp_probe(apply, 4, 0.5, fam, lbl, g, cfg);
  // unweighted: L4 ratio flat across modulations (measured growth 1.000000)
  CHECK(k0.growth == doctest::Approx(1.0).epsilon(1e-6));
  // half a derivative of weight overpays and the ratios decay (measured 0.281322)
  CHECK(k5.growth == doctest::Approx(0.281322).epsilon(1e-3));
}

TEST_CASE("lp probe blows up on back-propagated chirps with the plain denominator") {
  Grid g(512, 16.0);
  PhysicsConfig cfg;
  std::vector<Field> fam;
  std::vector<double> lbl;
  for (double lam : {1.0, 4.0, 16.0, 64.0}) {
    Field u(g.n);
    for (int i = 0; i < g.n; ++i)
      u[i] = std::pow(2.0 * lam, 0.25) * std::exp(-PI * lam * g.x(i) * g.x(i));
    fam.push_back(free_propagate(u, g, -1.0, cfg));
    lbl.push_back(lam);
  }
  auto apply = [&](const Field& u) { return free_propagate(u, g, 1.0, cfg); };
  RatioTable k0 = lp_probe(apply, 4, 0, fam, lbl, g, cfg);
  RatioTable k5 = lp_probe(apply, 4, 0.5, fam, lbl, g, cfg);
  CHECK(k0.growth == doctest::Approx(2.289741).epsilon(5e-3));
  CHECK(k5.growth == doctest::Approx(0.797774).epsilon(5e-3));
  CHECK(k0.growth > 2.0);       // genuine unboundedness signal
  CHECK(k5.growth < 1.0);       // the weighted norm absorbs it
  CHECK_THROWS_WITH(lp_probe(apply, 1, 0, fam, lbl, g, cfg),
                    doctest::Contains("p must lie in (1, inf)"));
}

TEST_CASE("fourier sharpness probe matches the dilation heuristic") {
  Grid g(512, 16.0);
  PhysicsConfig cfg;
  std::vector<Field> family;
  std::vector<double> lambdas{1.0, 2.0, 4.0, 8.0};
  for (double lam : lambdas) {
    Field f(g.n);
    for (int i = 0; i < g.n; ++i) {
      double x = g.x(i);
      f[i] = std::sqrt(lam) * std::exp(-PI * lam * lam * x * x);
    }
    family.push_back(std::move(f));
  }
  double p = 4.0 / 3.0;
  RatioTable k0 = fourier_sharpness_probe(p, 0, 0, family, lambdas, g, cfg);
  RatioTable k5 = fourier_sharpness_probe(p, 0.5, 0, family, lambdas, g, cfg);
  CHECK(k0.growth == doctest::Approx(2.8389).epsilon(0.01));
  CHECK(k5.growth == doctest::Approx(1.0410).epsilon(0.01));
  // p = 2 control: Plancherel kills the growth entirely
  RatioTable pl = fourier_sharpness_probe(2, 0, 0, family, lambdas, g, cfg);
  CHECK(pl.growth == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("pointwise report measures sups inside the window only") {
  Grid g(64, 8.0);
  KernelMatrix oracle = KernelMatrix::identity(g);
  // two approximants: oracle + bump inside the window, oracle + bump outside
  KernelMatrix inside = oracle, outside = oracle;
  int ci = 32;                     // x = 0, well inside the central half
  inside.at(ci, ci) += cplx(0.25 / g.dx());
  int bi = 2;                      // x near -8, outside [-4, 4)
  outside.at(bi, bi) += cplx(9.0 / g.dx());

  WindowReport rep = pointwise_report({inside, outside}, {1, 2}, oracle);
  REQUIRE(rep.sup_errors.size() == 2);
  CHECK(rep.sup_errors[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(rep.sup_errors[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rep.labels[0] == 1);
  CHECK(rep.proxy_spread >= 1.0);

  // explicit window variant
  WindowReport rep2 = pointwise_report({inside}, {1}, oracle, -1.0, 1.0);
  CHECK(rep2.sup_errors[0] == doctest::Approx(0.25).epsilon(1e-12));
  WindowReport rep3 = pointwise_report({inside}, {1}, oracle, 1.0, 3.0);
  CHECK(rep3.sup_errors[0] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("pointwise report validates its window and labels") {
  Grid g(64, 8.0);
  KernelMatrix oracle = KernelMatrix::identity(g);
  CHECK_THROWS_AS(pointwise_report({}, {}, oracle), std::invalid_argument);
  CHECK_THROWS_AS(pointwise_report({oracle}, {1, 2}, oracle),
                  std::invalid_argument);
  CHECK_THROWS_AS(pointwise_report({oracle}, {1}, oracle, 3.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(pointwise_report({oracle}, {1}, oracle, -20.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("hbar sweep aggregates the per-hbar fits") {
  std::vector<double> hbars{1.0, 0.5, 0.25};
  auto runner = [](double h) {
    RateReport r;
    r.meshes = {0.4, 0.2, 0.1};
    // slope 2 + small hbar-dependent wobble; finest error scales with hbar
    for (double m : r.meshes) r.errors.push_back(h * m * m * (1 + 0.01 * h));
    RateReport fit = rate_fit(r.meshes, r.errors);
    return fit;
  };
  HbarSweep sw = hbar_sweep(hbars, runner);
  REQUIRE(sw.reports.size() == 3);
  CHECK(sw.slope_min == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(sw.slope_max == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(sw.matched_error_spread == doctest::Approx(4.0).epsilon(1e-2));
  CHECK_THROWS_WITH(hbar_sweep({2.0}, runner),
                    doctest::Contains("hbar must lie in (0, 1]"));
}

TEST_CASE("standard families have the documented shapes") {
  Grid g(512, 16.0);
  auto wide = gaussian_family(g, Convention::PDE);
  auto narrow = gaussian_family(g, Convention::PDE, true);
  CHECK(wide.size() == 10);
  CHECK(narrow.size() == 7);
  for (const auto& f : wide)
    CHECK(l2_norm(f, g) == doctest::Approx(1.0).epsilon(1e-6));

  auto suite = norm_test_suite(g);
  CHECK(suite.size() == 20);
  for (const auto& f : suite) {
    CHECK(all_finite(f));
    CHECK(l2_norm(f, g) > 0.0);
  }
}

TEST_CASE("family distance vanishes on identical kernels and sees perturbations") {
  Grid g(128, 8.0);
  KernelMatrix A = KernelMatrix::identity(g);
  CHECK(family_distance(A, A, Convention::PDE) == 0.0);
  KernelMatrix B = A;
  B.at(64, 64) += cplx(0.5 / g.dx());
  CHECK(family_distance(A, B, Convention::PDE) > 1e-3);
}
