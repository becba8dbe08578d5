#pragma once
// Grids, fields, physics conventions. Everything downstream builds on these.

#include <complex>
#include <cstddef>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace pilab {

using cplx = std::complex<double>;
using Field = std::vector<cplx>;

inline constexpr double PI = 3.141592653589793238462643383279502884;

// Fourier phase convention. PDE: F f(xi) = (2pi)^{-1/2} \int f(x) e^{-i x xi} dx.
// HA:  F f(xi) = \int f(x) e^{-2 pi i x xi} dx.
enum class Convention { PDE, HA };

struct PhysicsConfig {
  double hbar = 1.0;
  Convention convention = Convention::PDE;
};

// Generator scales per clock convention:
//   PDE: U(t) = e^{-it(hbar xi^2/2 + V/hbar)},  HA: U(t) = e^{-it(pi xi^2 + 2 pi V)}.
inline double kinetic_symbol(double xi, const PhysicsConfig& cfg) {
  return cfg.convention == Convention::PDE ? cfg.hbar * xi * xi / 2.0
                                           : PI * xi * xi;
}
inline double potential_scale(const PhysicsConfig& cfg) {
  return cfg.convention == Convention::PDE ? 1.0 / cfg.hbar : 2.0 * PI;
}

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Uniform centered grid: x_i = x_min + i*dx, half-open on the right.
struct Grid {
  int n = 0;
  double x_min = 0.0, x_max = 0.0;

  Grid() = default;
  Grid(int n_points, double half_width)
      : n(n_points), x_min(-half_width), x_max(half_width) {
    require(n >= 2, "grid needs at least 2 points");
    require(half_width > 0, "grid half width must be positive");
  }
  static Grid box(int n_points, double lo, double hi) {
    Grid g;
    g.n = n_points; g.x_min = lo; g.x_max = hi;
    require(n_points >= 2 && hi > lo, "bad grid box");
    return g;
  }

  double dx() const { return (x_max - x_min) / n; }
  double x(int i) const { return x_min + i * dx(); }
  bool same(const Grid& o) const {
    return n == o.n && x_min == o.x_min && x_max == o.x_max;
  }

  // Dual (frequency) spacing: dxi = 2pi/(n dx) under PDE, 1/(n dx) under HA.
  double dxi(Convention c) const {
    double base = 1.0 / (n * dx());
    return c == Convention::PDE ? 2.0 * PI * base : base;
  }
  // Centered dual grid point, index 0..n-1.
  double xi(int k, Convention c) const { return (k - n / 2) * dxi(c); }
  double xi_min(Convention c) const { return xi(0, c); }
  double xi_max(Convention c) const { return xi(n - 1, c) + dxi(c); }
};

inline bool all_finite(const Field& f) {
  for (const auto& v : f)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

inline double l2_norm(const Field& f, const Grid& g) {
  double s = 0;
  for (const auto& v : f) s += std::norm(v);
  return std::sqrt(s * g.dx());
}

inline cplx inner(const Field& f, const Field& h, const Grid& g) {
  // <f, h> = dx sum f conj(h)
  cplx s = 0;
  for (size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(h[i]);
  return s * g.dx();
}

// L2-normalized Gaussian packet centered at (x0, xi0) with width scale sigma.
// Modulation phase follows the active convention.
inline Field gaussian_packet(const Grid& g, double x0, double sigma, double xi0,
                             Convention conv) {
  Field f(g.n);
  double norm = std::pow(PI * sigma * sigma, -0.25);
  double s = (conv == Convention::PDE) ? 1.0 : 2.0 * PI;
  for (int i = 0; i < g.n; ++i) {
    double u = g.x(i) - x0;
    f[i] = norm * std::exp(-u * u / (2 * sigma * sigma)) *
           std::exp(cplx(0, s * xi0 * g.x(i)));
  }
  return f;
}

}  // namespace pilab
