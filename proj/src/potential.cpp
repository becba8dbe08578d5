#include "pilab/potential.hpp"

#include <sstream>

namespace pilab {

bool Potential::bounded() const {
  for (const auto& t : terms)
    if (t.kind == PotentialKind::Harmonic) return false;
  return true;
}

namespace {

double term_deriv(const PotentialTerm& t, int m, double x) {
  switch (t.kind) {
    case PotentialKind::Zero:
      return 0.0;
    case PotentialKind::Harmonic: {
      double w2 = t.a * t.a;
      if (m == 0) return 0.5 * w2 * x * x;
      if (m == 1) return w2 * x;
      if (m == 2) return w2;
      return 0.0;
    }
    case PotentialKind::Cosine:
      // d^m/dx^m a cos(bx+c) = a b^m cos(bx + c + m pi/2)
      return t.a * std::pow(t.b, m) * std::cos(t.b * x + t.phase + m * PI / 2);
    case PotentialKind::LorentzianBump: {
      double u = x / t.b, d = 1.0 + u * u;
      double s = t.a / std::pow(t.b, m);
      switch (m) {
        case 0: return t.a / d;
        case 1: return s * (-2 * u) / (d * d);
        case 2: return s * (6 * u * u - 2) / (d * d * d);
        case 3: return s * 24 * u * (1 - u * u) / (d * d * d * d);
        case 4: return s * (120 * u * u * u * u - 240 * u * u + 24) /
                       (d * d * d * d * d);
        default:
          throw std::invalid_argument("lorentzian bump: derivative order > 4");
      }
    }
    case PotentialKind::GaussianBump: {
      double u = x / t.b, e = std::exp(-u * u);
      double s = t.a * std::pow(-1.0 / t.b, m);
      // physicists' Hermite polynomials: (d/du)^m e^{-u^2} = (-1)^m H_m(u) e^{-u^2}
      switch (m) {
        case 0: return t.a * e;
        case 1: return s * (2 * u) * e;
        case 2: return s * (4 * u * u - 2) * e;
        case 3: return s * (8 * u * u * u - 12 * u) * e;
        case 4: return s * (16 * u * u * u * u - 48 * u * u + 12) * e;
        default:
          throw std::invalid_argument("gaussian bump: derivative order > 4");
      }
    }
    case PotentialKind::Sum:
      throw std::logic_error("sum is not a leaf term");
  }
  return 0.0;
}

}  // namespace

double Potential::deriv(int m, double x) const {
  double s = 0;
  for (const auto& t : terms) s += term_deriv(t, m, x);
  return s;
}

std::string Potential::describe() const {
  if (terms.empty()) return "zero";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms) {
    if (!first) os << " + ";
    first = false;
    switch (t.kind) {
      case PotentialKind::Harmonic: os << "harmonic(omega=" << t.a << ")"; break;
      case PotentialKind::Cosine:
        os << "cosine(a=" << t.a << ",b=" << t.b << ",phase=" << t.phase << ")";
        break;
      case PotentialKind::LorentzianBump:
        os << "lorentzian_bump(a=" << t.a << ",b=" << t.b << ")";
        break;
      case PotentialKind::GaussianBump:
        os << "gaussian_bump(a=" << t.a << ",b=" << t.b << ")";
        break;
      default: os << "zero";
    }
  }
  return os.str();
}

}  // namespace pilab
