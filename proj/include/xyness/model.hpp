#pragma once

// XY chain NESS model: validated parameters and the scalar and 2x2 matrix
// functions of the angle xi that make up the two-point operator S(xi) and
// the Toeplitz symbol a(xi).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "xyness/errors.hpp"

namespace xyness {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

inline constexpr double kTwoPi = 2 * std::numbers::pi;

enum class Orientation {
  Normalize,  // swap reservoirs so that beta_L <= beta_R (delta >= 0)
  AsGiven,    // keep labels; delta may be negative (symmetry checks only)
};

class ModelParams {
 public:
  static ModelParams make(double gamma, double lambda, double beta_l, double beta_r,
                          Orientation orient = Orientation::Normalize) {
    if (!std::isfinite(gamma) || !std::isfinite(lambda) || !std::isfinite(beta_l) ||
        !std::isfinite(beta_r))
      throw std::invalid_argument("model parameters must be finite");
    if (!(std::abs(gamma) < 1)) throw std::invalid_argument("anisotropy gamma must lie in (-1, 1)");
    if (!(beta_l > 0) || !(beta_r > 0))
      throw std::invalid_argument("inverse temperatures beta_L, beta_R must be positive");
    ModelParams p;
    p.gamma_ = gamma;
    p.lambda_ = lambda;
    p.beta_l_ = beta_l;
    p.beta_r_ = beta_r;
    if (orient == Orientation::Normalize && beta_l > beta_r) {
      std::swap(p.beta_l_, p.beta_r_);
      p.swapped_ = true;
    }
    p.beta_ = 0.5 * (p.beta_r_ + p.beta_l_);
    p.delta_ = 0.5 * (p.beta_r_ - p.beta_l_);
    p.critical_ = (gamma == 0 && std::abs(lambda) <= 1) || (gamma != 0 && std::abs(lambda) == 1);
    return p;
  }

  double gamma() const { return gamma_; }
  double lambda() const { return lambda_; }
  double beta_l() const { return beta_l_; }
  double beta_r() const { return beta_r_; }
  double beta() const { return beta_; }
  double delta() const { return delta_; }
  bool critical() const { return critical_; }
  bool swapped() const { return swapped_; }
  bool equilibrium() const { return delta_ == 0; }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "gamma=" << gamma_ << " lambda=" << lambda_ << " beta_l=" << beta_l_
       << " beta_r=" << beta_r_;
    return os.str();
  }

 private:
  ModelParams() = default;
  double gamma_ = 0, lambda_ = 0, beta_l_ = 1, beta_r_ = 1, beta_ = 1, delta_ = 0;
  bool critical_ = false, swapped_ = false;
};

// cos(xi) - lambda, rewritten around xi = 0 or pi to avoid cancellation
// where it vanishes for |lambda| = 1.
inline double cos_minus_lambda(double xi, const ModelParams& p) {
  const double l = p.lambda();
  if (l >= 0) {
    const double s = std::sin(0.5 * xi);
    return (1 - l) - 2 * s * s;
  }
  const double c = std::cos(0.5 * xi);
  return 2 * c * c - (1 + l);
}

inline double kappa(double xi, const ModelParams& p) {
  const double g = p.gamma();
  return 2 * p.lambda() * std::sin(xi) - (1 - g * g) * std::sin(2 * xi);
}

inline double mu(double xi, const ModelParams& p) {
  return std::hypot(cos_minus_lambda(xi, p), p.gamma() * std::sin(xi));
}

// sign with sign(0) = 0
inline int sign_of(double v) { return (v > 0) - (v < 0); }

inline int sign_kappa(double xi, const ModelParams& p) { return sign_of(kappa(xi, p)); }

// sh(alpha m) / (ch(beta m) + ch(delta m)) in exponent-shifted form.
inline double phi_of_mu(double alpha, double m, const ModelParams& p) {
  const double b = p.beta(), d = p.delta();
  const double num = std::exp((alpha - b) * m) - std::exp(-(alpha + b) * m);
  const double den = 1 + std::exp(-2 * b * m) + std::exp((d - b) * m) + std::exp(-(d + b) * m);
  return num / den;
}

inline double phi(double alpha, double xi, const ModelParams& p) {
  return phi_of_mu(alpha, mu(xi, p), p);
}

inline double tanh_half(double b, double m) { return std::tanh(0.5 * b * m); }

// log th(x), accurate both for x -> 0 and for large x where th(x) -> 1.
inline double log_tanh(double x) {
  if (x < 0.5) return std::log(std::tanh(x));
  const double e = std::exp(-2 * x);
  return std::log1p(-2 * e / (1 + e));
}

inline cplx q_factor(double xi, const ModelParams& p) {
  const double m = mu(xi, p);
  if (m == 0) throw DomainError("q_factor: mu(xi) = 0 at xi = " + std::to_string(xi));
  const cplx num(cos_minus_lambda(xi, p), -p.gamma() * std::sin(xi));
  return num * std::polar(1.0, xi) / m;
}

// Zeros of kappa in [0, 2pi): kappa = 2 sin(xi) (lambda - (1 - gamma^2) cos(xi)).
inline std::vector<double> kappa_zeros(const ModelParams& p) {
  std::vector<double> z{0.0, std::numbers::pi};
  const double c = p.lambda() / (1 - p.gamma() * p.gamma());
  if (std::abs(c) <= 1) {
    const double r = std::acos(c);
    z.push_back(r);
    z.push_back(kTwoPi - r);
  }
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end()), z.end());
  if (!z.empty() && z.back() >= kTwoPi) z.pop_back();
  return z;
}

// Zeros of mu in [0, 2pi); nonempty only at critical parameters.
inline std::vector<double> mu_zeros(const ModelParams& p) {
  std::vector<double> z;
  if (p.gamma() == 0 && std::abs(p.lambda()) <= 1) {
    const double r = std::acos(p.lambda());
    z.push_back(r);
    z.push_back(kTwoPi - r);
  } else if (p.gamma() != 0 && p.lambda() == 1) {
    z.push_back(0.0);
  } else if (p.gamma() != 0 && p.lambda() == -1) {
    z.push_back(std::numbers::pi);
  }
  for (auto& v : z)
    if (v >= kTwoPi) v -= kTwoPi;
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end()), z.end());
  return z;
}

// ||mu||_inf. mu^2 = (1 - gamma^2) c^2 - 2 lambda c + lambda^2 + gamma^2 with
// c = cos(xi) is convex in c, so the maximum sits at c = +-1; the interior
// stationary point is kept as a candidate for completeness.
inline double mu_sup(const ModelParams& p) {
  const double g2 = p.gamma() * p.gamma(), l = p.lambda();
  auto mu2 = [&](double c) { return (1 - g2) * c * c - 2 * l * c + l * l + g2; };
  double best = std::max(mu2(1.0), mu2(-1.0));
  const double cs = l / (1 - g2);
  if (std::abs(cs) <= 1) best = std::max(best, mu2(cs));
  return std::sqrt(std::max(best, 0.0));
}

inline Mat2 pauli(int k) {
  const cplx i(0, 1);
  Mat2 s;
  switch (k) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -i, i, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw std::out_of_range("pauli index must be 0..3");
  }
  return s;
}

struct SymbolValue {
  Mat2 entries;
  double xi = 0;
};

inline SymbolValue symbol(double xi, const ModelParams& p) {
  const double m = mu(xi, p);
  const double fd = phi_of_mu(p.delta(), m, p);
  const double fb = phi_of_mu(p.beta(), m, p);
  const cplx q = q_factor(xi, p);
  const double sd = sign_kappa(xi, p) * fd;
  SymbolValue a;
  a.xi = xi;
  a.entries << sd, -q * fb, std::conj(q) * fb, -sd;
  return a;
}

// One-particle Hamiltonian h(xi) = (cos xi - lambda) sigma_3 - gamma sin xi sigma_2.
inline Mat2 one_particle_h(double xi, const ModelParams& p) {
  return cos_minus_lambda(xi, p) * pauli(3) - p.gamma() * std::sin(xi) * pauli(2);
}

// Fermi-function route: h has eigenvalues +-mu and k = sign(kappa) mu is
// scalar, so (1 + e^{-(beta h + delta k)})^{-1} = sum over spectral
// projectors P_pm = (1 +- h/mu)/2 of 1/(1 + e^{-delta k -+ beta mu}).
inline Mat2 two_point_fermi(double xi, const ModelParams& p) {
  const double m = mu(xi, p);
  auto fermi = [](double t) { return t > 0 ? std::exp(-t) / (1 + std::exp(-t)) : 1 / (1 + std::exp(t)); };
  const double k = sign_kappa(xi, p) * m;
  const Mat2 id = Mat2::Identity();
  if (m == 0) return fermi(0.0) * id;
  const Mat2 n = one_particle_h(xi, p) / m;
  const double fp = fermi(-p.delta() * k - p.beta() * m);
  const double fm = fermi(-p.delta() * k + p.beta() * m);
  return 0.5 * (id + n) * fp + 0.5 * (id - n) * fm;
}

// Pauli route: S = s0 sigma_0 + s . sigma with s0 = 1/2 + sign(kappa) phi_delta / 2
// and s = phi_beta r / 2, r = (0, -gamma sin xi, cos xi - lambda) / mu.
inline Mat2 two_point_pauli(double xi, const ModelParams& p) {
  const double m = mu(xi, p);
  if (m == 0) throw DomainError("two_point_operator: direction r(xi) undefined where mu = 0");
  const double s0 = 0.5 + 0.5 * sign_kappa(xi, p) * phi_of_mu(p.delta(), m, p);
  const double half_fb = 0.5 * phi_of_mu(p.beta(), m, p);
  const double s2 = half_fb * (-p.gamma() * std::sin(xi)) / m;
  const double s3 = half_fb * cos_minus_lambda(xi, p) / m;
  return s0 * pauli(0) + s2 * pauli(2) + s3 * pauli(3);
}

inline Mat2 two_point_operator(double xi, const ModelParams& p) {
  const Mat2 pauli_form = two_point_pauli(xi, p);
  const Mat2 fermi_form = two_point_fermi(xi, p);
  const double diff = (pauli_form - fermi_form).cwiseAbs().maxCoeff();
  if (!(diff <= 1e-10))
    throw NumericalError("two_point_operator", "Pauli and Fermi routes disagree by " +
                                                   std::to_string(diff) + " at xi=" + std::to_string(xi));
  return pauli_form;
}

}  // namespace xyness
