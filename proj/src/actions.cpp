#include "pilab/actions.hpp"

#include <algorithm>
#include <cmath>

#include "pilab/oracles.hpp"

namespace pilab {

Subdivision Subdivision::uniform(double t0, double t1, int legs) {
  require(legs >= 1 && t1 > t0, "subdivision: need t1 > t0 and at least one leg");
  Subdivision o;
  o.times.resize(legs + 1);
  for (int j = 0; j <= legs; ++j)
    o.times[j] = t0 + (t1 - t0) * (static_cast<double>(j) / legs);
  o.times.back() = t1;
  return o;
}

void Subdivision::validate() const {
  require(times.size() >= 2, "subdivision: need at least two times");
  for (size_t j = 1; j < times.size(); ++j)
    require(times[j] > times[j - 1], "subdivision: times must increase strictly");
}

double mesh(const Subdivision& omega) {
  omega.validate();
  double m = 0;
  for (size_t j = 1; j < omega.times.size(); ++j)
    m = std::max(m, omega.times[j] - omega.times[j - 1]);
  return m;
}

const std::vector<std::pair<double, double>>& gauss_legendre_01() {
  static const std::vector<std::pair<double, double>> rule = [] {
    const int n = 32;
    std::vector<std::pair<double, double>> r(n);
    for (int k = 0; k < n; ++k) {
      // Newton iteration on P_n from the Chebyshev-like initial guess
      double x = std::cos(PI * (k + 0.75) / (n + 0.5));
      double dp = 0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = x;
        for (int j = 2; j <= n; ++j) {
          double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      r[k] = {0.5 * (x + 1), 1.0 / ((1 - x * x) * dp * dp)};
    }
    std::sort(r.begin(), r.end());
    return r;
  }();
  return rule;
}

double broken_line_action(const Potential& V, double t,
                          const std::vector<double>& points) {
  require(points.size() >= 2, "broken_line_action: need at least two points");
  require(t > 0, "broken_line_action: t must be positive");
  const int n = static_cast<int>(points.size()) - 1;
  const double tau = t / n;
  double s = 0;
  for (int k = 1; k <= n; ++k) {
    double v = (points[k] - points[k - 1]) / tau;
    s += tau * (0.5 * v * v - V.value(points[k]));
  }
  return s;
}

namespace {

// One 4th-order (Yoshida) symplectic step of x'' = -V'(x).
struct Yoshida4 {
  double c1, c2, c3, c4, d1, d2, d3;
  Yoshida4() {
    double w1 = 1.0 / (2.0 - std::cbrt(2.0));
    double w0 = -std::cbrt(2.0) * w1;
    c1 = c4 = w1 / 2;
    c2 = c3 = (w0 + w1) / 2;
    d1 = d3 = w1;
    d2 = w0;
  }
  void step(const Potential& V, double h, double& x, double& v) const {
    x += c1 * h * v;
    v -= d1 * h * V.deriv(1, x);
    x += c2 * h * v;
    v -= d2 * h * V.deriv(1, x);
    x += c3 * h * v;
    v -= d3 * h * V.deriv(1, x);
    x += c4 * h * v;
  }
};

// Integrate over [0, tau] from (y, v0); optionally record (x, v) after each
// of the nsteps macro-steps (traj gets nsteps+1 states).
double integrate_endpoint(const Potential& V, double tau, double y, double v0,
                          int nsteps, std::vector<std::pair<double, double>>* traj) {
  static const Yoshida4 Y;
  double h = tau / nsteps, x = y, v = v0;
  if (traj) {
    traj->clear();
    traj->push_back({x, v});
  }
  for (int k = 0; k < nsteps; ++k) {
    Y.step(V, h, x, v);
    if (traj) traj->push_back({x, v});
  }
  return x;
}

}  // namespace

double classical_action(const Potential& V, double t, double s, double x,
                        double y) {
  const double tau = t - s;
  require(tau > 0 && std::isfinite(tau), "classical_action: need t > s");
  const int nsteps = 32;
  const double scale = std::max({1.0, std::abs(x), std::abs(y)});

  // shoot on the initial velocity
  double va = (x - y) / tau;
  double fa = integrate_endpoint(V, tau, y, va, nsteps, nullptr) - x;
  double vb = va + std::max(0.25, 0.05 * std::abs(va));
  double v_hit = va;
  bool found = std::abs(fa) <= 1e-11 * scale;
  if (!found) {
    double fb = integrate_endpoint(V, tau, y, vb, nsteps, nullptr) - x;
    for (int it = 0; it < 50; ++it) {
      if (std::abs(fb) <= 1e-11 * scale) {
        v_hit = vb;
        found = true;
        break;
      }
      double denom = fb - fa;
      if (std::abs(denom) < 1e-13 * std::max(1.0, std::abs(vb - va)))
        throw NoClassicalPath(
            "endpoint map is stationary in the initial velocity (conjugate point)");
      double vc = vb - fb * (vb - va) / denom;
      if (std::abs(vc) > 1e7 * scale / tau)
        throw NoClassicalPath("shooting velocity diverged (conjugate point suspected)");
      va = vb;
      fa = fb;
      vb = vc;
      fb = integrate_endpoint(V, tau, y, vb, nsteps, nullptr) - x;
    }
    if (!found)
      throw NoClassicalPath("shooting did not converge within 50 iterations");
  }

  // Near a conjugate point the endpoint map flattens to pure integrator error
  // and the secant can "converge" onto a huge spurious velocity. A genuine
  // trajectory re-hits the target under step refinement; a spurious one
  // drifts by an O(1) amount, so verify before accepting.
  std::vector<std::pair<double, double>> traj;
  const int fine = 2 * nsteps;
  double x_fine = integrate_endpoint(V, tau, y, v_hit, fine, &traj);
  if (std::abs(x_fine - x) >
      1e-5 * scale + 1e-7 * std::abs(v_hit) * std::max(1.0, tau))
    throw NoClassicalPath(
        "trajectory not confirmed under step refinement (conjugate point suspected)");
  // composite Simpson of the Lagrangian along the refined trajectory
  auto lag = [&](const std::pair<double, double>& st) {
    return 0.5 * st.second * st.second - V.value(st.first);
  };
  double h = tau / fine, acc = lag(traj.front()) + lag(traj.back());
  for (int k = 1; k < fine; ++k) acc += (k % 2 ? 4.0 : 2.0) * lag(traj[k]);
  return acc * h / 3.0;
}

double midpoint_action(const Potential& V, MidpointRule rule, double t,
                       double s, double x, double y) {
  const double tau = t - s;
  require(tau > 0, "midpoint_action: need t > s");
  double d = x - y, pot = 0;
  switch (rule) {
    case MidpointRule::V1:
      pot = 0.5 * (V.value(x) + V.value(y));
      break;
    case MidpointRule::V2:
      pot = V.value(0.5 * (x + y));
      break;
    case MidpointRule::Avg:
      for (const auto& [u, w] : gauss_legendre_01()) pot += w * V.value(y + u * d);
      break;
  }
  return d * d / (2 * tau) - tau * pot;
}

double WSeries::w1(double x, double y, int m) const {
  double d = x - y, acc = 0;
  for (const auto& [u, w] : gauss_legendre_01())
    acc += w * std::pow(u, m) * potential.deriv(m, y + u * d);
  return -acc;
}

double WSeries::b2(double x, double y, int m) const {
  double d = x - y, acc = 0;
  for (const auto& [u, w] : gauss_legendre_01())
    acc += w * std::pow(u, m + 1) * (1 - u) * potential.deriv(m + 2, y + u * d);
  return -0.5 * acc;
}

double WSeries::c30(double x, double y, int m) const {
  require(m >= 0 && m <= 2, "WSeries: derivative order out of range");
  double d = x - y, acc = 0;
  for (const auto& [u, w] : gauss_legendre_01()) {
    double p = y + u * d;
    double g1 = w1(p, y, 1);
    if (m == 0) {
      acc += w * u * u * g1 * g1;
    } else if (m == 1) {
      acc += w * u * u * u * 2.0 * g1 * w1(p, y, 2);
    } else {
      double g2 = w1(p, y, 2);
      acc += w * u * u * u * u * 2.0 * (g2 * g2 + g1 * w1(p, y, 3));
    }
  }
  return -0.5 * acc;
}

double WSeries::c32(double x, double y, int m) const {
  double d = x - y, acc = 0;
  for (const auto& [u, w] : gauss_legendre_01())
    acc += w * std::pow(u, m + 2) * (1 - u) * (1 - u) *
           potential.deriv(m + 4, y + u * d);
  return acc / 8.0;
}

cplx WSeries::wk(int k, double x, double y, int m) const {
  require(k >= 1 && k <= order, "WSeries: coefficient index out of range");
  switch (k) {
    case 1:
      return w1(x, y, m);
    case 2:
      return cplx(0, hbar) * b2(x, y, m);
    default:
      return c30(x, y, m) + hbar * hbar * c32(x, y, m);
  }
}

WSeries hj_coefficients(const Potential& V, int N, double hbar, double s) {
  require(N >= 1 && N <= 3, "hj_coefficients: order must be 1, 2 or 3");
  require(hbar > 0, "hj_coefficients: hbar must be positive");
  return WSeries{V, N, hbar, s};
}

cplx approx_action(const WSeries& w, double t, double s, double x, double y) {
  const double tau = t - s;
  require(tau > 0, "approx_action: need t > s");
  double d = x - y;
  cplx acc = d * d / (2 * tau);
  double tk = 1;
  for (int k = 1; k <= w.order; ++k) {
    tk *= tau;
    acc += tk * w.wk(k, x, y);
  }
  return acc;
}

cplx hj_residual(const WSeries& w, double t, double s, double x, double y) {
  const double tau = t - s;
  require(tau > 0, "hj_residual: need t > s");
  const double d = x - y;
  cplx dSdt = -d * d / (2 * tau * tau);
  cplx dSdx = d / tau;
  cplx d2Sdx2 = 1.0 / tau;
  double tk = 1;
  for (int k = 1; k <= w.order; ++k) {
    double tk1 = tk;  // tau^{k-1}
    tk *= tau;
    dSdt += static_cast<double>(k) * tk1 * w.wk(k, x, y);
    dSdx += tk * w.wk(k, x, y, 1);
    d2Sdx2 += tk * w.wk(k, x, y, 2);
  }
  return dSdt + 0.5 * dSdx * dSdx + w.potential.value(x) +
         cplx(0, w.hbar / (2 * tau)) - cplx(0, 0.5 * w.hbar) * d2Sdx2;
}

}  // namespace pilab
