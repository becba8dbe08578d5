#include "pilab/tfa.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace pilab {

extern "C" {
void zgemm_(const char*, const char*, const int*, const int*, const int*,
            const void*, const void*, const int*, const void*, const int*,
            const void*, void*, const int*);
}

namespace {

double phase_scale(Convention c) { return c == Convention::PDE ? 1.0 : 2.0 * PI; }
double fourier_constant(Convention c) {
  return c == Convention::PDE ? 1.0 / std::sqrt(2.0 * PI) : 1.0;
}

// C_rm(M x N) = A_rm(M x K) @ B_rm(K x N), column-major trick
void gemm_nn(int M, int N, int K, const cplx* A, const cplx* B, cplx* C) {
  const cplx one(1, 0), zero(0, 0);
  zgemm_("N", "N", &N, &M, &K, &one, B, &N, A, &K, &zero, C, &N);
}

// C_rm(M x N) = A_rm(K x M)^H @ B_rm(K x N)
void gemm_hn(int M, int N, int K, const cplx* A, const cplx* B, cplx* C) {
  const cplx one(1, 0), zero(0, 0);
  zgemm_("N", "C", &N, &M, &K, &one, B, &N, A, &M, &zero, C, &N);
}

}  // namespace

Field tf_shift(const Field& g, const Grid& grid, PhasePoint z,
               const PhysicsConfig& cfg) {
  require(std::isfinite(z.x) && std::isfinite(z.xi), "tf_shift: non-finite point");
  const Convention conv = cfg.convention;
  require(z.x >= grid.x_min && z.x <= grid.x_max &&
              z.xi >= grid.xi_min(conv) && z.xi <= grid.xi_max(conv),
          "tf_shift: point outside the grid's phase-space box");
  // translation on the Fourier side (unitary for off-grid x too)
  Field fhat = fourier(g, grid, conv);
  const double s = phase_scale(conv);
  for (int k = 0; k < grid.n; ++k)
    fhat[k] *= std::exp(cplx(0, -s * z.x * grid.xi(k, conv)));
  Field out = fourier_inv(fhat, grid, conv);
  for (int j = 0; j < grid.n; ++j)
    out[j] *= std::exp(cplx(0, s * z.xi * grid.x(j)));
  return out;
}

Field hermite_window(const Grid& grid, int k) {
  require(k >= 0 && k <= 12, "hermite_window: index out of range");
  const int n = grid.n;
  // recurrence for L2-orthonormal Hermite functions in u = sqrt(2 pi) x
  std::vector<double> prev(n, 0), cur(n), next(n);
  for (int j = 0; j < n; ++j) {
    double u = std::sqrt(2 * PI) * grid.x(j);
    cur[j] = std::exp(-0.5 * u * u);
  }
  for (int m = 0; m < k; ++m) {
    double a = std::sqrt(2.0 / (m + 1)), b = std::sqrt(double(m) / (m + 1));
    for (int j = 0; j < n; ++j) {
      double u = std::sqrt(2 * PI) * grid.x(j);
      next[j] = a * u * cur[j] - b * prev[j];
    }
    prev.swap(cur);
    cur.swap(next);
  }
  Field h(n);
  for (int j = 0; j < n; ++j) h[j] = cur[j];
  double nrm = l2_norm(h, grid);
  require(nrm > 0, "hermite_window: degenerate window");
  for (auto& v : h) v /= nrm;
  return h;
}

STFTGrid stft(const Field& f, const Field& g, const Grid& grid, double alpha,
              double beta, const PhysicsConfig& cfg) {
  require(alpha > 0 && beta > 0, "stft: lattice steps must be positive");
  require(l2_norm(g, grid) > 0, "stft: window must be nonzero");
  const Convention conv = cfg.convention;
  const int n = grid.n;
  const double dx = grid.dx(), dxi = grid.dxi(conv);

  // lattice m*alpha in [x_min, x_max), half-open like the grid itself; points
  // within tolerance of the right edge alias the left one periodically
  auto lat_lo = [](double lo, double step) {
    return static_cast<int>(std::ceil(lo / step - 1e-9));
  };
  auto lat_hi = [](double hi, double step) {
    double tol = 1e-9 * std::max(1.0, std::abs(hi));
    return static_cast<int>(std::floor((hi - tol) / step));
  };
  STFTGrid out;
  int mx_lo = lat_lo(grid.x_min, alpha), mx_hi = lat_hi(grid.x_max, alpha);
  for (int m = mx_lo; m <= mx_hi; ++m) out.xs.push_back(m * alpha);
  int nx_lo = lat_lo(grid.xi_min(conv), beta);
  int nx_hi = lat_hi(grid.xi_max(conv), beta);
  for (int m = nx_lo; m <= nx_hi; ++m) out.xis.push_back(m * beta);
  const size_t nxs = out.xs.size(), nxis = out.xis.size();
  require(nxs > 0 && nxis > 0, "stft: empty lattice");
  out.values.assign(nxs * nxis, cplx(0));

  double rx = alpha / dx, rxi = beta / dxi;
  bool aligned = std::abs(rx - std::round(rx)) < 1e-9 * std::max(1.0, rx) &&
                 std::abs(rxi - std::round(rxi)) < 1e-9 * std::max(1.0, rxi);
  if (aligned) {
    const int kx = static_cast<int>(std::round(rx));
    const int kxi = static_cast<int>(std::round(rxi));
    const double invC = 1.0 / fourier_constant(conv);
    for (size_t a = 0; a < nxs; ++a) {
      int j0 = (mx_lo + static_cast<int>(a)) * kx;  // window offset in samples
      Field h(n);
      for (int j = 0; j < n; ++j) {
        int jj = j - j0;
        jj %= n;
        if (jj < 0) jj += n;  // spectral translation wraps periodically
        h[j] = f[j] * std::conj(g[jj]);
      }
      Field hhat = fourier(h, grid, conv);
      for (size_t b = 0; b < nxis; ++b) {
        int k = n / 2 + (nx_lo + static_cast<int>(b)) * kxi;
        require(k >= 0 && k < n, "stft: lattice frequency index out of range");
        out.values[a * nxis + b] = invC * hhat[k];
      }
    }
  } else {
    for (size_t a = 0; a < nxs; ++a)
      for (size_t b = 0; b < nxis; ++b) {
        Field gz = tf_shift(g, grid, {out.xs[a], out.xis[b]}, cfg);
        out.values[a * nxis + b] = inner(f, gz, grid);
      }
  }
  return out;
}

namespace {

double holder_norm(const std::vector<double>& vals, double p, double weight) {
  // (sum w |v|^p)^{1/p}, p may be infinity (weight ignored for sup)
  if (std::isinf(p)) {
    double m = 0;
    for (double v : vals) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0;
  for (double v : vals) acc += std::pow(std::abs(v), p);
  return std::pow(weight * acc, 1.0 / p);
}

double bracket(double v) { return std::sqrt(1.0 + v * v); }

// C-infinity taper: 1 on [0, .5], 0 beyond .75, smooth blend between
double bump_taper(double r) {
  r = std::abs(r);
  double w = 4.0 * (0.75 - r);  // >= 1 on the plateau, <= 0 outside support
  if (w >= 1) return 1.0;
  if (w <= 0) return 0.0;
  auto phi = [](double u) { return std::exp(-1.0 / u); };
  return phi(w) / (phi(w) + phi(1 - w));
}

}  // namespace

NormResult modulation_norm(const Field& f, const Grid& grid, double p, double q,
                           double s, NormMethod method, const GaborSystem& sys,
                           const PhysicsConfig& cfg) {
  require(p >= 1 && q >= 1, "modulation_norm: p, q must be >= 1");
  require(std::abs(s) <= 10, "modulation_norm: weight exponent capped at 10");
  NormResult res;
  const Convention conv = cfg.convention;

  if (method == NormMethod::FreqDecomp) {
    Field fhat = fourier(f, grid, conv);
    const double ximax = grid.xi_max(conv);
    const int K = static_cast<int>(std::ceil(ximax)) + 1;
    const int n = grid.n;
    // pointwise renormalization makes the bump family an exact partition
    std::vector<double> total(n, 0);
    for (int c = -K; c <= K; ++c)
      for (int k = 0; k < n; ++k)
        total[k] += bump_taper(grid.xi(k, conv) - c);
    std::vector<double> piece_norms;
    for (int c = -K; c <= K; ++c) {
      Field piece(n);
      bool nonzero = false;
      for (int k = 0; k < n; ++k) {
        double b = bump_taper(grid.xi(k, conv) - c);
        piece[k] = total[k] > 0 ? fhat[k] * (b / total[k]) : cplx(0);
        if (b != 0) nonzero = true;
      }
      if (!nonzero) continue;
      Field px = fourier_inv(piece, grid, conv);
      std::vector<double> mags(n);
      for (int j = 0; j < n; ++j) mags[j] = std::abs(px[j]);
      double lp = holder_norm(mags, p, grid.dx());
      piece_norms.push_back(std::pow(bracket(c), s) * lp);
    }
    res.value = holder_norm(piece_norms, q, 1.0);
    return res;
  }

  double alpha = method == NormMethod::Stft ? grid.dx() : sys.alpha;
  double beta = method == NormMethod::Stft ? grid.dxi(conv) : sys.beta;
  if (method == NormMethod::Gabor && sys.alpha * sys.beta >= 1 - 1e-12) {
    res.frame_warning = true;
    res.note = "gabor lattice at or beyond critical density; equivalence not guaranteed";
  }
  const Field& win = sys.window;
  require(!win.empty(), "modulation_norm: system window is empty");
  STFTGrid V = stft(f, win, grid, alpha, beta, cfg);
  const size_t nxs = V.xs.size(), nxis = V.xis.size();
  // measure weights: Riemann cells for the stft route, counting for gabor
  double wx = method == NormMethod::Stft ? alpha : 1.0;
  double wxi = method == NormMethod::Stft ? beta : 1.0;
  std::vector<double> col(nxs), outer(nxis);
  for (size_t b = 0; b < nxis; ++b) {
    for (size_t a = 0; a < nxs; ++a) col[a] = std::abs(V.values[a * nxis + b]);
    outer[b] = std::pow(bracket(V.xis[b]), s) * holder_norm(col, p, wx);
  }
  res.value = holder_norm(outer, q, wxi);
  return res;
}

FrameBounds frame_bounds(const GaborSystem& sys, const Grid& grid,
                         const PhysicsConfig& cfg) {
  const int n = grid.n;
  require(!sys.window.empty() && static_cast<int>(sys.window.size()) == n,
          "frame_bounds: window/grid mismatch");
  const Convention conv = cfg.convention;
  require(sys.alpha > 0 && sys.beta > 0, "frame_bounds: lattice steps");
  // same half-open box convention as the stft lattice (right edge aliases left)
  auto lat_lo = [](double lo, double step) {
    return static_cast<int>(std::ceil(lo / step - 1e-9));
  };
  auto lat_hi = [](double hi, double step) {
    double tol = 1e-9 * std::max(1.0, std::abs(hi));
    return static_cast<int>(std::floor((hi - tol) / step));
  };
  std::vector<PhasePoint> pts;
  int mlo = lat_lo(grid.x_min, sys.alpha), mhi = lat_hi(grid.x_max, sys.alpha);
  int klo = lat_lo(grid.xi_min(conv), sys.beta);
  int khi = lat_hi(grid.xi_max(conv), sys.beta);
  for (int m = mlo; m <= mhi; ++m)
    for (int k = klo; k <= khi; ++k)
      pts.push_back({m * sys.alpha, k * sys.beta});
  require(!pts.empty(), "frame_bounds: empty lattice");
  const int P = static_cast<int>(pts.size());
  // columns pi(z) w, stored as an n x P row-major matrix
  std::vector<cplx> G(static_cast<size_t>(n) * P);
  for (int z = 0; z < P; ++z) {
    Field gz = tf_shift(sys.window, grid, pts[z], cfg);
    for (int i = 0; i < n; ++i) G[static_cast<size_t>(i) * P + z] = gz[i];
  }
  // frame operator S = dx * G G^H
  std::vector<cplx> S(static_cast<size_t>(n) * n);
  {
    const cplx one(1, 0), zero(0, 0);
    // C_rm = A_rm @ B_rm^H with A = B = G (n x P)
    zgemm_("C", "N", &n, &n, &P, &one, G.data(), &P, G.data(), &P, &zero,
           S.data(), &n);
  }
  for (auto& v : S) v *= grid.dx();
  std::vector<double> w(n);
  int info = LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'N', 'U', n,
                            reinterpret_cast<lapack_complex_double*>(S.data()),
                            n, w.data());
  require(info == 0, "frame_bounds: eigensolver failed");
  return {w.front(), w.back()};
}

double frame_energy(const Field& f, const GaborSystem& sys, const Grid& grid,
                    const PhysicsConfig& cfg) {
  STFTGrid V = stft(f, sys.window, grid, sys.alpha, sys.beta, cfg);
  double acc = 0;
  for (const cplx& v : V.values) acc += std::norm(v);
  return acc;
}

PhaseField wigner(const Field& f, const Field& g, const Grid& grid,
                  const PhysicsConfig& cfg) {
  require(cfg.convention == Convention::HA,
          "wigner: defined under the 2 pi phase normalization only");
  const int n = grid.n;
  require(n % 4 == 0, "wigner: grid size must be divisible by 4");
  const int m = n / 2;
  Grid ygrid(m, grid.x_max);  // spacing 2 dx, same box
  PhaseField W;
  W.x_grid = grid;
  W.xis.resize(m);
  for (int k = 0; k < m; ++k) W.xis[k] = ygrid.xi(k, Convention::HA);
  W.values.assign(static_cast<size_t>(n) * m, cplx(0));
  for (int i = 0; i < n; ++i) {
    Field h(m, cplx(0));
    for (int k = 0; k < m; ++k) {
      int ip = i + k - n / 4, im = i - k + n / 4;
      if (ip >= 0 && ip < n && im >= 0 && im < n)
        h[k] = f[ip] * std::conj(g[im]);
    }
    Field hhat = fourier(h, ygrid, Convention::HA);
    for (int k = 0; k < m; ++k) W.values[static_cast<size_t>(i) * m + k] = hhat[k];
  }
  return W;
}

std::vector<GaborMatrixSample> gabor_matrix(const KernelMatrix& T,
                                            const Field& window,
                                            const std::vector<PhasePoint>& zs,
                                            const std::vector<PhasePoint>& ws,
                                            const PhysicsConfig& cfg) {
  const Grid& g = T.grid;
  const int n = g.n;
  require(static_cast<int>(window.size()) == n, "gabor_matrix: window size");
  const int Z = static_cast<int>(zs.size()), W = static_cast<int>(ws.size());
  require(Z > 0 && W > 0, "gabor_matrix: empty sample lists");
  std::vector<cplx> Gz(static_cast<size_t>(n) * Z), Gw(static_cast<size_t>(n) * W);
  for (int z = 0; z < Z; ++z) {
    Field col = tf_shift(window, g, zs[z], cfg);
    for (int i = 0; i < n; ++i) Gz[static_cast<size_t>(i) * Z + z] = col[i];
  }
  for (int w = 0; w < W; ++w) {
    Field col = tf_shift(window, g, ws[w], cfg);
    for (int i = 0; i < n; ++i) Gw[static_cast<size_t>(i) * W + w] = col[i];
  }
  // TG = weight * T G  (n x Z), then M = dx * Gw^H TG  (W x Z)
  std::vector<cplx> TG(static_cast<size_t>(n) * Z);
  gemm_nn(n, Z, n, T.entries.data(), Gz.data(), TG.data());
  for (auto& v : TG) v *= T.weight;
  std::vector<cplx> M(static_cast<size_t>(W) * Z);
  gemm_hn(W, Z, n, Gw.data(), TG.data(), M.data());
  std::vector<GaborMatrixSample> out;
  out.reserve(static_cast<size_t>(W) * Z);
  for (int z = 0; z < Z; ++z)
    for (int w = 0; w < W; ++w)
      out.push_back(
          {zs[z], ws[w], std::abs(M[static_cast<size_t>(w) * Z + z] * g.dx())});
  return out;
}

CanonicalMap CanonicalMap::identity() {
  return {"identity", [](PhasePoint z) { return z; }};
}
CanonicalMap CanonicalMap::free_flow(double t) {
  return {"free_flow(" + std::to_string(t) + ")",
          [t](PhasePoint z) { return PhasePoint{z.x + t * z.xi, z.xi}; }};
}
CanonicalMap CanonicalMap::rotation(double theta) {
  double c = std::cos(theta), s = std::sin(theta);
  return {"rotation(" + std::to_string(theta) + ")",
          [c, s](PhasePoint z) {
            return PhasePoint{c * z.x + s * z.xi, -s * z.x + c * z.xi};
          }};
}

FioDecayReport fio_decay_fit(const std::vector<GaborMatrixSample>& samples,
                             const CanonicalMap& chi,
                             const std::vector<double>& s_grid) {
  require(!samples.empty(), "fio_decay_fit: no samples");
  FioDecayReport rep;
  rep.s_values = s_grid;
  rep.seminorms.assign(s_grid.size(), 0.0);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const auto& smp : samples) {
    PhasePoint img = chi.map(smp.z);
    double d = std::hypot(smp.w.x - img.x, smp.w.xi - img.xi);
    double br = bracket(d);
    for (size_t i = 0; i < s_grid.size(); ++i)
      rep.seminorms[i] =
          std::max(rep.seminorms[i], std::pow(br, s_grid[i]) * smp.magnitude);
    // fit only clearly off-graph samples above the quadrature noise floor;
    // on-graph points pin the intercept, not the tail slope
    if (smp.magnitude <= 1e-11 || d <= 0.3) continue;
    double X = std::log(br), Y = std::log(smp.magnitude);
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
    ++cnt;
  }
  double var = cnt * sxx - sx * sx;
  rep.fitted_samples = cnt;
  rep.decay_exponent = var > 1e-12 ? -(cnt * sxy - sx * sy) / var : 0.0;
  return rep;
}

}  // namespace pilab
