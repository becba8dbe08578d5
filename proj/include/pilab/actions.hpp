#pragma once
// Short-time action rules: broken-line sums, the classical boundary-value
// action, midpoint replacements of the potential integral, and the recursive
// Taylor coefficients W_k of the expanded action together with the modified
// Hamilton-Jacobi residual used to validate them.

#include <vector>

#include "pilab/core.hpp"
#include "pilab/potential.hpp"

namespace pilab {

struct Subdivision {
  std::vector<double> times;  // strictly increasing, at least two entries

  static Subdivision uniform(double t0, double t1, int legs);
  int legs() const { return static_cast<int>(times.size()) - 1; }
  double gap(int j) const { return times[j + 1] - times[j]; }
  void validate() const;
};

// Largest consecutive gap.
double mesh(const Subdivision& omega);

// Sum over legs of (t/n) [ (1/2)((x_k - x_{k-1})/(t/n))^2 - V(x_k) ],
// k = 1..n with n = points.size() - 1.
double broken_line_action(const Potential& V, double t,
                          const std::vector<double>& points);

// Action of the classical path from (s, y) to (t, x): the boundary value
// problem is solved by a secant search on the initial velocity around a
// 4th-order symplectic integrator, and the Lagrangian is integrated along
// the converged trajectory. Throws NoClassicalPath if the shooting stalls
// (conjugate point) or fails to converge within 50 iterations.
double classical_action(const Potential& V, double t, double s, double x,
                        double y);

enum class MidpointRule { V1, V2, Avg };

// |x-y|^2/(2(t-s)) minus the chosen replacement of the potential integral:
// V1 endpoint average, V2 midpoint value, Avg exact segment average
// (32-point Gauss-Legendre).
double midpoint_action(const Potential& V, MidpointRule rule, double t,
                       double s, double x, double y);

// Coefficients of the expanded short-time action
//   S(t,s,x,y) = |x-y|^2/(2(t-s)) + sum_{k=1..N} (t-s)^k W_k(x,y)
// obtained from the transport hierarchy k W_k + (x-y) d/dx W_k = -R_k with
// R_1 = V, R_k = (1/2) sum_{i+j=k-1} W_i' W_j' - (i hbar / 2) W_{k-1}''.
// Everything reduces to weighted line integrals of derivatives of V along
// the segment from y to x; those are evaluated by Gauss-Legendre quadrature
// with analytic integrands (the fields are not periodic on the box, so
// spectral differentiation is avoided on purpose):
//   W_1^(m)(x,y)  = -int_0^1 r^m V^(m)(y + r(x-y)) dr
//   B_2^(m)(x,y)  = -(1/2) int_0^1 r^{m+1}(1-r) V^(m+2)(y + r(x-y)) dr
//   C_32^(m)(x,y) = (1/8) int_0^1 r^{m+2}(1-r)^2 V^(m+4)(y + r(x-y)) dr
//   C_30(x,y)     = -(1/2) int_0^1 r^2 [W_1^(1)(y + r(x-y), y)]^2 dr
// with W_2 = i hbar B_2 (the pure-imaginary counterterm) and
// W_3 = C_30 + hbar^2 C_32. The hbar-free fields are what gets cached.
struct WSeries {
  Potential potential;
  int order = 1;      // N in 1..3
  double hbar = 1.0;
  double base_time = 0.0;  // kept for the interface; V is static here

  double w1(double x, double y, int m = 0) const;
  double b2(double x, double y, int m = 0) const;
  double c30(double x, double y, int m = 0) const;
  double c32(double x, double y, int m = 0) const;
  // W_k and its first two x-derivatives, hbar factors included
  cplx wk(int k, double x, double y, int m = 0) const;
};

WSeries hj_coefficients(const Potential& V, int N, double hbar, double s = 0.0);

// The displayed sum S^(N); complex because W_2 carries the counterterm.
cplx approx_action(const WSeries& w, double t, double s, double x, double y);

// Residual of the modified Hamilton-Jacobi equation with S^(N) inserted:
//   dS/dt + (1/2)(dS/dx)^2 + V(x) + i hbar/(2(t-s)) - (i hbar/2) d2S/dx2.
// Should vanish to order (t-s)^N.
cplx hj_residual(const WSeries& w, double t, double s, double x, double y);

// Nodes and weights of the shared 32-point Gauss-Legendre rule on [0, 1].
const std::vector<std::pair<double, double>>& gauss_legendre_01();

}  // namespace pilab
