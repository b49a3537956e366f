#pragma once

// Singular-value diagnostics of T_n[a]: small-value counts, the smoothed
// indicator chi_eps, and the empirical side of the Avram-Parter limit
//
//   (1/2n) sum_j g(s_j)  ->  (1/2) int [g(th(beta_L mu/2)) + g(th(beta_R mu/2))] dxi/2pi.

#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "xyness/fourier.hpp"
#include "xyness/model.hpp"
#include "xyness/quadrature.hpp"
#include "xyness/skewlinalg.hpp"
#include "xyness/toeplitz.hpp"

namespace xyness {

using RealFn = std::function<double(double)>;

inline constexpr double kDefaultEps = 1e-3;

// C-infinity step on [0, 1]: 0 at t <= 0, 1 at t >= 1.
inline double smooth_step(double t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  const double a = std::exp(-1 / t), b = std::exp(-1 / (1 - t));
  return a / (a + b);
}

// chi_eps: support in (eps, ceiling + 1), identically 1 on [eps + eps^2, ceiling].
inline RealFn smooth_indicator(double eps, double ceiling) {
  if (!(eps > 0) || !(eps + eps * eps < ceiling))
    throw std::invalid_argument("smooth_indicator: need 0 < eps < eps + eps^2 < ceiling");
  return [eps, ceiling](double s) {
    const double rise = eps * eps;
    if (s <= eps) return 0.0;
    if (s < eps + rise) return smooth_step((s - eps) / rise);
    if (s <= ceiling) return 1.0;
    return smooth_step(ceiling + 1 - s);
  };
}

// (chi_eps log)(s), the test function of the decay proof.
inline RealFn chi_log(double eps, double ceiling) {
  auto chi = smooth_indicator(eps, ceiling);
  return [chi](double s) {
    const double c = chi(s);
    return c == 0 ? 0.0 : c * std::log(s);
  };
}

// s^2 on [-1, 1], smoothly cut off to zero at |s| = 2.
inline RealFn squared_plateau() {
  return [](double s) {
    const double a = std::abs(s);
    return s * s * smooth_step(2 - a);
  };
}

inline double empirical_mean(const std::vector<double>& values, const RealFn& g) {
  double sum = 0;
  for (double s : values) sum += g(s);
  return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

// Limit side, using the closed-form singular values th(beta_{L,R} mu / 2) of a(xi).
inline double avram_parter_limit(const RealFn& g, const ModelParams& p, double tol = 1e-11) {
  std::vector<double> breaks{0.0, std::numbers::pi};
  for (double z : mu_zeros(p)) breaks.push_back(z);
  breaks.push_back(kTwoPi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  auto f = [&](double xi) {
    const double m = mu(xi, p);
    return 0.5 * (g(tanh_half(p.beta_l(), m)) + g(tanh_half(p.beta_r(), m))) / kTwoPi;
  };
  quad::QuadOptions opt;
  opt.tol = tol;
  return quad::integrate(f, breaks, opt).value;
}

inline int count_small(const std::vector<double>& values, double eps) {
  int c = 0;
  for (double s : values) c += (s <= eps);
  return c;
}

inline int count_small(int n, double eps, const BlockSequence& seq) {
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("count_small: need 0 < eps < 1");
  return count_small(singular_values(assemble(n, seq).entries), eps);
}

struct SpectralSummary {
  int n = 0;
  std::vector<double> values;  // ascending, length 2n
  double eps = kDefaultEps;
  int count_small = 0;
  double empirical_mean = 0;
  double limit_value = 0;
  double gap = 0;
};

inline SpectralSummary summarize(int n, std::vector<double> values, const RealFn& g, const ModelParams& p,
                                 double eps = kDefaultEps) {
  SpectralSummary s;
  s.n = n;
  s.values = std::move(values);
  s.eps = eps;
  s.count_small = count_small(s.values, eps);
  s.empirical_mean = empirical_mean(s.values, g);
  s.limit_value = avram_parter_limit(g, p);
  s.gap = std::abs(s.empirical_mean - s.limit_value);
  return s;
}

inline SpectralSummary avram_parter_gap(int n, const RealFn& g, const BlockSequence& seq, const ModelParams& p,
                                        double eps = kDefaultEps) {
  return summarize(n, singular_values(assemble(n, seq).entries), g, p, eps);
}

}  // namespace xyness
