#include "pilab/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pilab/fourier.hpp"

namespace pilab {

namespace {

struct LineFit {
  double slope, intercept, residual;
};

LineFit loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  const int n = static_cast<int>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    double X = std::log(xs[i]), Y = std::log(ys[i]);
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
  }
  double det = n * sxx - sx * sx;
  require(std::abs(det) > 1e-12, "rate_fit: degenerate mesh values");
  double slope = (n * sxy - sx * sy) / det;
  double intercept = (sy - slope * sx) / n;
  double rss = 0;
  for (int i = 0; i < n; ++i) {
    double r = std::log(ys[i]) - (intercept + slope * std::log(xs[i]));
    rss += r * r;
  }
  return {slope, intercept, std::sqrt(rss / n)};
}

}  // namespace

RateReport rate_fit(const std::vector<double>& meshes,
                    const std::vector<double>& errors) {
  require(meshes.size() == errors.size(), "rate_fit: length mismatch");
  require(meshes.size() >= 3, "rate_fit: need at least 3 points");
  for (size_t i = 0; i < meshes.size(); ++i)
    require(meshes[i] > 0 && errors[i] > 0,
            "rate_fit: meshes and errors must be positive");
  RateReport rep;
  rep.meshes = meshes;
  rep.errors = errors;
  LineFit fit = loglog_fit(rep.meshes, rep.errors);
  if (fit.residual > 0.1 && rep.meshes.size() >= 4) {
    size_t coarse = static_cast<size_t>(
        std::max_element(rep.meshes.begin(), rep.meshes.end()) -
        rep.meshes.begin());
    rep.meshes.erase(rep.meshes.begin() + coarse);
    rep.errors.erase(rep.errors.begin() + coarse);
    rep.dropped_coarsest = true;
    rep.note = "dropped coarsest mesh point (pre-asymptotic residual)";
    fit = loglog_fit(rep.meshes, rep.errors);
  }
  rep.slope = fit.slope;
  rep.intercept = fit.intercept;
  rep.residual = fit.residual;
  require(std::isfinite(rep.slope), "rate_fit: non-finite slope");
  return rep;
}

WindowReport pointwise_report(const std::vector<KernelMatrix>& approx,
                              const std::vector<int>& labels,
                              const KernelMatrix& oracle, double window_lo,
                              double window_hi) {
  require(!approx.empty(), "pointwise_report: no kernels");
  require(approx.size() == labels.size(), "pointwise_report: label mismatch");
  const Grid& g = oracle.grid;
  require(window_lo < window_hi, "pointwise_report: empty window");
  require(window_lo >= g.x_min && window_hi <= g.x_max,
          "pointwise_report: window outside grid");
  for (const auto& K : approx)
    require(K.grid.same(g), "pointwise_report: grid mismatch");
  std::vector<int> idx;
  for (int i = 0; i < g.n; ++i)
    if (g.x(i) >= window_lo && g.x(i) <= window_hi) idx.push_back(i);
  require(!idx.empty(), "pointwise_report: window contains no grid points");

  WindowReport rep;
  rep.window_lo = window_lo;
  rep.window_hi = window_hi;
  rep.labels = labels;
  for (const auto& K : approx) {
    double sup_err = 0, sup_val = 0;
    for (int i : idx)
      for (int j : idx) {
        sup_err = std::max(sup_err, std::abs(K.at(i, j) - oracle.at(i, j)));
        sup_val = std::max(sup_val, std::abs(K.at(i, j)));
      }
    rep.sup_errors.push_back(sup_err);
    rep.sup_values.push_back(sup_val);
  }
  double lo = *std::min_element(rep.sup_values.begin(), rep.sup_values.end());
  double hi = *std::max_element(rep.sup_values.begin(), rep.sup_values.end());
  rep.proxy_spread = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
  return rep;
}

WindowReport pointwise_report(const std::vector<KernelMatrix>& approx,
                              const std::vector<int>& labels,
                              const KernelMatrix& oracle) {
  const Grid& g = oracle.grid;
  return pointwise_report(approx, labels, oracle, g.x_min / 2, g.x_max / 2);
}

RatioTable lp_probe(const std::function<Field(const Field&)>& apply, double p,
                    double k, const std::vector<Field>& family,
                    const std::vector<double>& labels, const Grid& g,
                    const PhysicsConfig& cfg) {
  require(p > 1 && !std::isinf(p), "lp_probe: p must lie in (1, inf)");
  require(!family.empty() && family.size() == labels.size(),
          "lp_probe: family/label mismatch");
  RatioTable tab;
  for (size_t i = 0; i < family.size(); ++i) {
    double den = field_norm(family[i], g, p, k, cfg);
    if (den < 1e-300) {
      tab.note += "skipped zero-norm member " + std::to_string(i) + "; ";
      continue;
    }
    double num = field_norm(apply(family[i]), g, p, 0.0, cfg);
    tab.labels.push_back(labels[i]);
    tab.ratios.push_back(num / den);
  }
  require(!tab.ratios.empty(), "lp_probe: every member was skipped");
  tab.max_ratio = *std::max_element(tab.ratios.begin(), tab.ratios.end());
  tab.growth = tab.ratios.back() / tab.ratios.front();
  return tab;
}

RatioTable fourier_sharpness_probe(double p, double k1, double k2,
                                   const std::vector<Field>& family,
                                   const std::vector<double>& labels,
                                   const Grid& g, const PhysicsConfig& cfg) {
  require(p > 1 && !std::isinf(p), "fourier_sharpness_probe: p in (1, inf)");
  require(!family.empty() && family.size() == labels.size(),
          "fourier_sharpness_probe: family/label mismatch");
  RatioTable tab;
  for (size_t i = 0; i < family.size(); ++i) {
    double den = field_norm(family[i], g, p, k1, cfg);
    if (den < 1e-300) {
      tab.note += "skipped zero-norm member " + std::to_string(i) + "; ";
      continue;
    }
    Field hat = fourier(family[i], g, cfg.convention);
    // the weighted norm of the transform lives on the frequency grid; reuse
    // field_norm by treating the dual grid as a spatial one
    Grid dual = Grid::box(g.n, g.xi_min(cfg.convention), g.xi_max(cfg.convention));
    double num = field_norm(hat, dual, p, k2, cfg);
    tab.labels.push_back(labels[i]);
    tab.ratios.push_back(num / den);
  }
  require(!tab.ratios.empty(), "fourier_sharpness_probe: all members skipped");
  tab.max_ratio = *std::max_element(tab.ratios.begin(), tab.ratios.end());
  tab.growth = tab.ratios.back() / tab.ratios.front();
  return tab;
}

HbarSweep hbar_sweep(const std::vector<double>& hbars,
                     const std::function<RateReport(double)>& run) {
  require(!hbars.empty(), "hbar_sweep: empty hbar list");
  for (double h : hbars)
    require(h > 0 && h <= 1, "hbar_sweep: hbar must lie in (0, 1]");
  HbarSweep sweep;
  sweep.hbars = hbars;
  std::vector<double> finest;
  for (double h : hbars) {
    sweep.reports.push_back(run(h));
    finest.push_back(sweep.reports.back().errors.back());
  }
  auto [smin, smax] = std::minmax_element(
      sweep.reports.begin(), sweep.reports.end(),
      [](const RateReport& a, const RateReport& b) { return a.slope < b.slope; });
  sweep.slope_min = smin->slope;
  sweep.slope_max = smax->slope;
  auto [emin, emax] = std::minmax_element(finest.begin(), finest.end());
  sweep.matched_error_spread = *emin > 0 ? *emax / *emin
                                         : std::numeric_limits<double>::infinity();
  return sweep;
}

std::vector<Field> gaussian_family(const Grid& g, Convention conv, bool narrow) {
  using T = std::tuple<double, double, double>;
  static const std::vector<T> wide = {
      {0, 1, 0},    {0, 1, 3},   {1.5, .7, -2}, {-1.5, 1.2, 1}, {0, .5, 5},
      {2, 1, 0},    {-2, .8, -4}, {0, 2, 1},    {1, 1.5, 2},    {-1, .6, 0}};
  static const std::vector<T> tight = {
      {0, .3, 0}, {0, .3, 4},  {1, .3, -4}, {-1, .25, 2},
      {0, .5, 0}, {.5, .4, 6}, {-.5, .35, -6}};
  std::vector<Field> out;
  for (const auto& [x0, s, xi0] : narrow ? tight : wide)
    out.push_back(gaussian_packet(g, x0, s, xi0, conv));
  return out;
}

double family_distance(const KernelMatrix& K1, const KernelMatrix& K2,
                       Convention conv, bool narrow) {
  require(K1.grid.same(K2.grid), "family_distance: grid mismatch");
  double worst = 0;
  for (const Field& f : gaussian_family(K1.grid, conv, narrow)) {
    Field a = K1.apply(f), b = K2.apply(f);
    for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    worst = std::max(worst, l2_norm(a, K1.grid) / l2_norm(f, K1.grid));
  }
  return worst;
}

std::vector<Field> norm_test_suite(const Grid& g) {
  std::vector<Field> out = gaussian_family(g, Convention::HA);
  // Hermite-like excitations of the first five packets
  for (int k = 0; k < 5; ++k) {
    Field f(g.n);
    for (int i = 0; i < g.n; ++i) f[i] = g.x(i) * out[k][i];
    double nrm = std::max(l2_norm(f, g), 1e-30);
    for (auto& v : f) v /= nrm;
    out.push_back(f);
  }
  Field chirp(g.n), bumps(g.n), lorentz(g.n), lap(g.n), sinc(g.n);
  for (int i = 0; i < g.n; ++i) {
    double x = g.x(i);
    chirp[i] = std::exp(-PI * x * x) * std::exp(cplx(0, PI * x * x));
    bumps[i] = std::exp(-PI * (x - 1) * (x - 1)) +
               std::exp(cplx(-PI * (x + 1) * (x + 1), 2 * PI * x));
    lorentz[i] = 1.0 / (1.0 + x * x);
    lap[i] = std::exp(-std::abs(x));
    sinc[i] = x == 0 ? 1.0 : std::sin(PI * x) / (PI * x);
  }
  out.push_back(chirp);
  out.push_back(bumps);
  out.push_back(lorentz);
  out.push_back(lap);
  out.push_back(sinc);
  return out;
}

}  // namespace pilab
