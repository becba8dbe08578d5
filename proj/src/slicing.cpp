#include "pilab/slicing.hpp"

#include <cmath>

namespace pilab {

namespace {

constexpr double kExceptionalSin = 1e-6;  // |sin t| at or below this is a caustic

bool is_taylor(ActionModelKind k) {
  return k == ActionModelKind::Taylor1 || k == ActionModelKind::Taylor2 ||
         k == ActionModelKind::Taylor3;
}

// taylor models are only trusted on gaps up to this fraction of hbar
double taylor_guard(double hbar) { return 0.5 * hbar * (1 + 1e-12); }

}  // namespace

ActionModel ActionModel::from_name(const std::string& name, const Potential& V,
                                   int legs) {
  ActionModel m;
  m.potential = V;
  m.legs = legs;
  if (name == "exact_free")
    m.kind = ActionModelKind::ExactFree;
  else if (name == "exact_harmonic")
    m.kind = ActionModelKind::ExactHarmonic;
  else if (name == "broken_line")
    m.kind = ActionModelKind::BrokenLine;
  else if (name == "classical_bvp")
    m.kind = ActionModelKind::ClassicalBvp;
  else if (name == "midpoint_v1")
    m.kind = ActionModelKind::MidpointV1;
  else if (name == "midpoint_v2")
    m.kind = ActionModelKind::MidpointV2;
  else if (name == "midpoint_avg")
    m.kind = ActionModelKind::MidpointAvg;
  else if (name == "taylor1")
    m.kind = ActionModelKind::Taylor1;
  else if (name == "taylor2")
    m.kind = ActionModelKind::Taylor2;
  else if (name == "taylor3")
    m.kind = ActionModelKind::Taylor3;
  else
    require(false, "unknown action model: " + name);
  return m;
}

const char* ActionModel::name() const {
  switch (kind) {
    case ActionModelKind::ExactFree: return "exact_free";
    case ActionModelKind::ExactHarmonic: return "exact_harmonic";
    case ActionModelKind::BrokenLine: return "broken_line";
    case ActionModelKind::ClassicalBvp: return "classical_bvp";
    case ActionModelKind::MidpointV1: return "midpoint_v1";
    case ActionModelKind::MidpointV2: return "midpoint_v2";
    case ActionModelKind::MidpointAvg: return "midpoint_avg";
    case ActionModelKind::Taylor1: return "taylor1";
    case ActionModelKind::Taylor2: return "taylor2";
    case ActionModelKind::Taylor3: return "taylor3";
  }
  return "?";
}

int ActionModel::taylor_order() const {
  switch (kind) {
    case ActionModelKind::Taylor1: return 1;
    case ActionModelKind::Taylor2: return 2;
    case ActionModelKind::Taylor3: return 3;
    default: return 0;
  }
}

WFields wseries_fields(const WSeries& w, const Grid& g) {
  WFields f;
  f.order = w.order;
  const int n = g.n;
  const size_t nn = static_cast<size_t>(n) * n;
  f.w1.resize(nn);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      f.w1[static_cast<size_t>(i) * n + j] = w.w1(g.x(i), g.x(j));
  if (w.order >= 2) {
    f.b2.resize(nn);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        f.b2[static_cast<size_t>(i) * n + j] = w.b2(g.x(i), g.x(j));
  }
  if (w.order >= 3) {
    f.c30.resize(nn);
    f.c32.resize(nn);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        f.c30[static_cast<size_t>(i) * n + j] = w.c30(g.x(i), g.x(j));
        f.c32[static_cast<size_t>(i) * n + j] = w.c32(g.x(i), g.x(j));
      }
  }
  return f;
}

cplx model_action_diff(const ActionModel& m, double tau, double x, double y,
                       double hbar) {
  require(tau > 0, "model action: need a positive gap");
  switch (m.kind) {
    case ActionModelKind::ExactFree:
      return 0.0;
    case ActionModelKind::ExactHarmonic: {
      double st = std::sin(tau);
      if (std::abs(st) <= kExceptionalSin)
        throw ExceptionalTime(
            "harmonic action degenerates near t = k pi (|sin t| <= 1e-6)");
      double d = x - y;
      return ((x * x + y * y) * std::cos(tau) - 2 * x * y) / (2 * st) -
             d * d / (2 * tau);
    }
    case ActionModelKind::BrokenLine: {
      double acc = 0, d = x - y;
      for (int k = 1; k <= m.legs; ++k)
        acc += m.potential.value(y + d * k / m.legs);
      return -tau / m.legs * acc;
    }
    case ActionModelKind::ClassicalBvp: {
      double d = x - y;
      return classical_action(m.potential, tau, 0, x, y) - d * d / (2 * tau);
    }
    case ActionModelKind::MidpointV1:
      return -tau * 0.5 * (m.potential.value(x) + m.potential.value(y));
    case ActionModelKind::MidpointV2:
      return -tau * m.potential.value(0.5 * (x + y));
    case ActionModelKind::MidpointAvg: {
      double d = x - y;
      return midpoint_action(m.potential, MidpointRule::Avg, tau, 0, x, y) -
             d * d / (2 * tau);
    }
    default: {
      WSeries w = hj_coefficients(m.potential, m.taylor_order(), hbar);
      double d = x - y;
      return approx_action(w, tau, 0, x, y) - d * d / (2 * tau);
    }
  }
}

cplx model_action(const ActionModel& m, double tau, double x, double y,
                  double hbar) {
  double d = x - y;
  return d * d / (2 * tau) + model_action_diff(m, tau, x, y, hbar);
}

namespace {

// phase difference S_model - S_free on the full grid pair set
std::vector<cplx> phase_diff_matrix(const ActionModel& m, const Grid& g,
                                    double tau, double hbar,
                                    const WFields* fields) {
  const int n = g.n;
  std::vector<cplx> D(static_cast<size_t>(n) * n);
  int N = m.taylor_order();
  if (N > 0) {
    WFields local;
    if (!fields) {
      local = wseries_fields(hj_coefficients(m.potential, N, hbar), g);
      fields = &local;
    }
    require(fields->order >= N, "parametrix: cached W fields of too low order");
    const double t2 = tau * tau, t3 = t2 * tau;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        size_t id = static_cast<size_t>(i) * n + j;
        cplx s = tau * fields->w1[id];
        if (N >= 2) s += cplx(0, hbar * t2) * fields->b2[id];
        if (N >= 3)
          s += t3 * (fields->c30[id] + hbar * hbar * fields->c32[id]);
        D[id] = s;
      }
    return D;
  }
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      D[static_cast<size_t>(i) * n + j] =
          model_action_diff(m, tau, g.x(i), g.x(j), hbar);
  return D;
}

void check_gap_guard(const ActionModel& m, double tau, const PhysicsConfig& cfg,
                     int gap_index) {
  require(tau > 0, "slice gap must be positive (gap " +
                       std::to_string(gap_index) + ")");
  if (m.taylor_order() > 0)
    require(tau <= taylor_guard(cfg.hbar),
            "gap " + std::to_string(gap_index) +
                " exceeds the taylor short-time guard 0.5*hbar");
}

}  // namespace

KernelMatrix parametrix_kernel(const ActionModel& m, const Grid& g, double t,
                               double s, const PhysicsConfig& cfg,
                               Realization realization, const WFields* fields) {
  require(cfg.convention == Convention::PDE,
          "parametrix kernels use the PDE convention");
  const double tau = t - s;
  check_gap_guard(m, tau, cfg, 0);
  const int n = g.n;
  std::vector<cplx> D = phase_diff_matrix(m, g, tau, cfg.hbar, fields);
  const cplx iob(0, 1.0 / cfg.hbar);
  KernelMatrix K(g);
  if (realization == Realization::Sampled) {
    // (2 pi i hbar tau)^{-1/2} e^{(i/hbar) S}; the free phase is explicit here
    cplx amp = std::exp(cplx(0, -PI / 4)) / std::sqrt(2 * PI * cfg.hbar * tau);
    const double inv = 1.0 / (2 * cfg.hbar * tau);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double d = g.x(i) - g.x(j);
        K.at(i, j) = amp * std::exp(cplx(0, d * d * inv) +
                                    iob * D[static_cast<size_t>(i) * n + j]);
      }
  } else {
    KernelMatrix U0 = exact_kernel(Potential::zero(), g, tau, cfg, 1);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        K.at(i, j) = U0.at(i, j) *
                     std::exp(iob * D[static_cast<size_t>(i) * n + j]);
  }
  require(all_finite(K.entries), "parametrix kernel has non-finite entries");
  return K;
}

KernelMatrix compose_over_subdivision(const ActionModel& m, const Grid& g,
                                      const Subdivision& omega,
                                      const PhysicsConfig& cfg,
                                      Realization realization) {
  omega.validate();
  const int L = omega.legs();
  for (int j = 0; j < L; ++j) check_gap_guard(m, omega.gap(j), cfg, j);

  WFields fields;
  const WFields* fp = nullptr;
  if (m.taylor_order() > 0) {
    fields = wseries_fields(
        hj_coefficients(m.potential, m.taylor_order(), cfg.hbar), g);
    fp = &fields;
  }

  // uniform subdivisions of a static potential repeat one slice kernel
  bool uniform = true;
  double g0 = omega.gap(0);
  for (int j = 1; j < L; ++j)
    if (std::abs(omega.gap(j) - g0) > 1e-12 * g0) uniform = false;
  if (uniform) {
    KernelMatrix slice = parametrix_kernel(m, g, omega.times[1], omega.times[0],
                                           cfg, realization, fp);
    return kernel_power(slice, L);
  }

  KernelMatrix acc = parametrix_kernel(m, g, omega.times[1], omega.times[0],
                                       cfg, realization, fp);
  for (int j = 1; j < L; ++j) {
    KernelMatrix next = parametrix_kernel(
        m, g, omega.times[j + 1], omega.times[j], cfg, realization, fp);
    acc = kernel_compose(next, acc);
  }
  return acc;
}

KernelMatrix trotter_approx(const Potential& V, const QuadraticHamiltonian& h0,
                            const Grid& g, double t, int n,
                            const PhysicsConfig& cfg,
                            const SpectralPropagator* quad_step) {
  require(V.bounded(), "trotter perturbation must be a bounded potential");
  require(n >= 1 && t > 0, "trotter: need n >= 1 and t > 0");
  const bool free_h0 = h0.A == 0 && h0.B == 0 && h0.C == 1;
  const bool harm_h0 = h0.A == 1 && h0.B == 0 && h0.C == 1;
  require(free_h0 || harm_h0,
          "trotter quadratic part must be free_particle() or harmonic()");
  const double tau = t / n;
  // B block of the step's classical flow (free shear / rotation by tau)
  double Bq = free_h0 ? tau : std::sin(tau);
  if (std::abs(Bq) <= kExceptionalSin)
    throw ExceptionalTime("trotter step time is exceptional (B block " +
                          std::to_string(Bq) + ")");

  KernelMatrix Q(g);
  if (free_h0) {
    Q = exact_kernel(Potential::zero(), g, tau, cfg, 1);
  } else if (quad_step) {
    require(quad_step->grid.n == g.n, "trotter: quadratic step grid mismatch");
    Q = quad_step->kernel(tau);
  } else {
    Q = SpectralPropagator(Potential::harmonic(1.0), g, cfg).kernel(tau);
  }
  const double ps = potential_scale(cfg);
  const int ng = g.n;
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ng; ++j) {
    cplx phase = std::exp(cplx(0, -tau * ps * V.value(g.x(j))));
    for (int i = 0; i < ng; ++i) Q.at(i, j) *= phase;
  }
  return kernel_power(Q, n);
}

}  // namespace pilab
