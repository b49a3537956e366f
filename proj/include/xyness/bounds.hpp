#pragma once

// Decay-rate bounds for |C(n)|.
//
//   theorem rate  B = (1/2) int log[th(beta_L mu/2) th(beta_R mu/2)] dxi/2pi
//   weak bound    log|det Omega(n)| <= 2n log th(beta_R ||mu||_inf / 2), all n

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "xyness/errors.hpp"
#include "xyness/model.hpp"
#include "xyness/quadrature.hpp"

namespace xyness {

inline constexpr double kBoundTol = 1e-9;

// At critical parameters the integrand has log singularities at the zeros of
// mu; they are panel endpoints, and largest-error bisection grades toward them.
inline quad::QuadResult<double> theorem_bound_quad(const ModelParams& p, double tol = kBoundTol) {
  if (!(tol > 0)) throw std::invalid_argument("theorem_bound: tol must be positive");
  std::vector<double> breaks{0.0, std::numbers::pi};
  for (double z : mu_zeros(p)) breaks.push_back(z);
  breaks.push_back(kTwoPi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  auto f = [&](double xi) {
    const double m = mu(xi, p);
    return 0.5 * (log_tanh(0.5 * p.beta_l() * m) + log_tanh(0.5 * p.beta_r() * m)) / kTwoPi;
  };
  quad::QuadOptions opt;
  opt.tol = tol;
  opt.max_panels = 50000;
  return quad::integrate(f, breaks, opt);
}

inline double theorem_bound(const ModelParams& p, double tol = kBoundTol) {
  const auto r = theorem_bound_quad(p, tol);
  if (!r.converged)
    throw NumericalError("bound", "theorem bound quadrature reached error " + std::to_string(r.error) +
                                      " > tol " + std::to_string(tol));
  return r.value;
}

// Per-unit-n log rate of the weak bound: 2 log th(beta_R ||mu||_inf / 2).
inline double weak_rate(const ModelParams& p) { return 2 * log_tanh(0.5 * p.beta_r() * mu_sup(p)); }

inline double weak_bound_log(int n, const ModelParams& p) {
  if (n < 1) throw std::invalid_argument("weak_bound_log: n must be >= 1");
  return n * weak_rate(p);
}

inline constexpr double kWeakBoundSlack = 1e-8;

inline bool weak_bound_holds(int n, double log_abs_det, const ModelParams& p) {
  return log_abs_det <= weak_bound_log(n, p) + kWeakBoundSlack;
}

struct BoundReport {
  double theorem_rate = 0;
  double theorem_err = 0;
  double weak_rate = 0;
  double mu_sup = 0;
  bool critical = false;
  bool equilibrium = false;
};

inline BoundReport bound_report(const ModelParams& p, double tol = kBoundTol) {
  BoundReport r;
  const auto q = theorem_bound_quad(p, tol);
  if (!q.converged)
    throw NumericalError("bound", "theorem bound quadrature reached error " + std::to_string(q.error));
  r.theorem_rate = q.value;
  r.theorem_err = q.error;
  r.mu_sup = mu_sup(p);
  r.weak_rate = weak_rate(p);
  r.critical = p.critical();
  r.equilibrium = p.equilibrium();
  return r;
}

}  // namespace xyness
