#include "pilab/fourier.hpp"

#include "pilab/fft.hpp"

namespace pilab {

// F f(xi_k) = C dx e^{-i s x0 xi_k} FFT[ f_j e^{-i s dx xi0 j} ]_k with
// s dx dxi = 2pi/n; the pre-twist reduces to (-1)^j on the centered dual grid.
Field fourier(const Field& f, const Grid& g, Convention conv) {
  require(all_finite(f), "fourier: non-finite samples");
  require(static_cast<int>(f.size()) == g.n, "fourier: field/grid mismatch");
  const int n = g.n;
  const double s = (conv == Convention::PDE) ? 1.0 : 2.0 * PI;
  const double C = (conv == Convention::PDE) ? 1.0 / std::sqrt(2.0 * PI) : 1.0;
  Field out(n);
  for (int j = 0; j < n; ++j) out[j] = (j % 2 == 0) ? f[j] : -f[j];
  fft_raw(out.data(), n, -1);
  const double dx = g.dx();
  for (int k = 0; k < n; ++k) {
    double phase = -s * g.x_min * g.xi(k, conv);
    out[k] *= C * dx * std::exp(cplx(0, phase));
  }
  return out;
}

Field fourier_inv(const Field& F, const Grid& g, Convention conv) {
  require(all_finite(F), "fourier_inv: non-finite samples");
  require(static_cast<int>(F.size()) == g.n, "fourier_inv: field/grid mismatch");
  const int n = g.n;
  const double s = (conv == Convention::PDE) ? 1.0 : 2.0 * PI;
  const double C = (conv == Convention::PDE) ? 1.0 / std::sqrt(2.0 * PI) : 1.0;
  const double dxi = g.dxi(conv);
  Field out(n);
  for (int k = 0; k < n; ++k) {
    double phase = s * g.x_min * dxi * k;
    out[k] = F[k] * std::exp(cplx(0, phase));
  }
  fft_raw(out.data(), n, +1);
  const double xi0 = g.xi_min(conv);
  for (int j = 0; j < n; ++j) {
    double phase = s * xi0 * g.x(j);
    out[j] *= C * dxi * std::exp(cplx(0, phase));
  }
  return out;
}

Field apply_multiplier(const Field& f, const Grid& g, Convention conv,
                       const std::vector<cplx>& symbol) {
  require(symbol.size() == f.size(), "apply_multiplier: symbol length");
  Field F = fourier(f, g, conv);
  for (int k = 0; k < g.n; ++k) F[k] *= symbol[k];
  return fourier_inv(F, g, conv);
}

Field bessel_multiplier(const Field& f, const Grid& g, double k,
                        const PhysicsConfig& cfg) {
  require(all_finite(f), "bessel_multiplier: non-finite samples");
  if (k == 0.0) return f;
  std::vector<cplx> sym(g.n);
  for (int i = 0; i < g.n; ++i) {
    double xi = g.xi(i, cfg.convention);
    // (1 - hbar Lap)^{k/2}: -Lap has symbol xi^2 (PDE) or 4 pi^2 xi^2 (HA).
    double w = (cfg.convention == Convention::PDE)
                   ? 1.0 + cfg.hbar * xi * xi
                   : 1.0 + cfg.hbar * 4.0 * PI * PI * xi * xi;
    sym[i] = std::pow(w, k / 2.0);
  }
  return apply_multiplier(f, g, cfg.convention, sym);
}

double field_norm(const Field& f, const Grid& g, double p, double k,
                  const PhysicsConfig& cfg) {
  require(p >= 1.0, "field_norm: p must be in [1, inf]");
  Field tmp;
  const Field* src = &f;
  if (k != 0.0) {
    tmp = bessel_multiplier(f, g, k, cfg);
    src = &tmp;
  }
  if (std::isinf(p)) {
    double m = 0;
    for (const auto& v : *src) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0;
  for (const auto& v : *src) s += std::pow(std::abs(v), p);
  return std::pow(s * g.dx(), 1.0 / p);
}

}  // namespace pilab
