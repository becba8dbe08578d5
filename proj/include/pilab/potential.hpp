#pragma once
// Potential families with closed-form derivatives. The smooth bounded families
// (cosine, bumps) have bounded derivatives of all orders; harmonic is the
// at-most-quadratic case and is excluded from bounded-perturbation roles.

#include <memory>
#include <string>
#include <vector>

#include "pilab/core.hpp"

namespace pilab {

enum class PotentialKind { Zero, Harmonic, Cosine, LorentzianBump, GaussianBump, Sum };

struct PotentialTerm {
  PotentialKind kind = PotentialKind::Zero;
  // harmonic: 0.5 * omega^2 x^2            (a = omega)
  // cosine:   a * cos(b x + phase)
  // lorentzian_bump: a / (1 + (x/b)^2)
  // gaussian_bump:   a * exp(-(x/b)^2)
  double a = 0, b = 1, phase = 0;
};

struct Potential {
  std::vector<PotentialTerm> terms;

  static Potential zero() { return {}; }
  static Potential harmonic(double omega = 1.0) {
    return {{{PotentialKind::Harmonic, omega, 1, 0}}};
  }
  static Potential cosine(double a, double b = 1.0, double phase = 0.0) {
    return {{{PotentialKind::Cosine, a, b, phase}}};
  }
  static Potential lorentzian_bump(double a, double b) {
    return {{{PotentialKind::LorentzianBump, a, b, 0}}};
  }
  static Potential gaussian_bump(double a, double b) {
    return {{{PotentialKind::GaussianBump, a, b, 0}}};
  }
  Potential plus(const Potential& other) const {
    Potential p = *this;
    p.terms.insert(p.terms.end(), other.terms.begin(), other.terms.end());
    return p;
  }

  bool is_zero() const { return terms.empty(); }
  bool bounded() const;  // true iff no harmonic term (Sjostrand-class candidates)

  double value(double x) const { return deriv(0, x); }
  // m-th derivative; any m for zero/harmonic/cosine, m <= 4 for bump families.
  double deriv(int m, double x) const;

  std::string describe() const;
};

}  // namespace pilab
