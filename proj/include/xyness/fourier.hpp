#pragma once

// Fourier coefficients of the symbol a(xi).
//
//   A_pp^x = int sign(kappa) phi_delta e^{-i x xi} dxi/2pi
//   A_pm^x = int (cos xi - lambda - i gamma sin xi)/mu phi_beta e^{-i x xi} dxi/2pi
//
// and the 2x2 blocks a_x = [[A_pp^x, -A_pm^{x-1}], [A_pm^{-x-1}, -A_pp^x]].
// The integrands jump where kappa vanishes (and, at critical parameters,
// where mu vanishes); panels are split exactly there so every panel sees an
// analytic integrand.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "xyness/errors.hpp"
#include "xyness/model.hpp"
#include "xyness/parallel.hpp"
#include "xyness/quadrature.hpp"

namespace xyness {

enum class Coefficient { PP, PM };

inline constexpr double kDefaultTol = 1e-12;

// Sorted discontinuity points of the coefficient integrands in [0, 2pi).
inline std::vector<double> breakpoints(const ModelParams& p) {
  std::vector<double> b = kappa_zeros(p);
  for (double z : mu_zeros(p)) b.push_back(z);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

inline quad::QuadResult<cplx> fourier_coefficient(long x, Coefficient which, const ModelParams& p,
                                                  double tol = kDefaultTol) {
  if (!(tol > 0)) throw std::invalid_argument("fourier_coefficient: tol must be positive");
  if (which == Coefficient::PP && p.delta() == 0) {
    quad::QuadResult<cplx> zero;
    zero.converged = true;
    return zero;
  }
  std::vector<double> breaks = breakpoints(p);
  breaks.push_back(kTwoPi);

  quad::QuadOptions opt;
  opt.tol = tol;
  if (std::labs(x) > 64) opt.max_panel_length = 8 * kTwoPi / static_cast<double>(std::labs(x));

  const double fx = static_cast<double>(x);
  if (which == Coefficient::PP) {
    auto f = [&](double xi) {
      const double v = sign_kappa(xi, p) * phi(p.delta(), xi, p);
      return v * std::polar(1.0 / kTwoPi, -fx * xi);
    };
    return quad::integrate(f, breaks, opt);
  }
  auto f = [&](double xi) {
    const double m = mu(xi, p);
    const cplx dir(cos_minus_lambda(xi, p), -p.gamma() * std::sin(xi));
    return dir * (phi_of_mu(p.beta(), m, p) / m) * std::polar(1.0 / kTwoPi, -fx * xi);
  };
  return quad::integrate(f, breaks, opt);
}

class BlockSequence {
 public:
  int n_max() const { return n_max_; }
  double tol() const { return tol_; }
  double err_estimate() const { return err_; }

  // A_pp^x for |x| <= n_max - 1
  cplx app(long x) const { return app_.at(check(x, -(n_max_ - 1), n_max_ - 1)); }
  // A_pm^y for -n_max <= y <= n_max - 2
  cplx apm(long y) const { return apm_.at(check(y, -n_max_, n_max_ - 2)); }
  // a_x for |x| <= n_max - 1
  const Mat2& block(long x) const {
    return blocks_.at(check(x, -(n_max_ - 1), n_max_ - 1));
  }

  static Mat2 assemble_block(cplx app_x, cplx apm_x_minus_1, cplx apm_minus_x_minus_1) {
    Mat2 a;
    a << app_x, -apm_x_minus_1, apm_minus_x_minus_1, -app_x;
    return a;
  }

 private:
  friend BlockSequence build_block_sequence(int, const ModelParams&, double, unsigned);

  static std::size_t check(long v, long lo, long hi) {
    if (v < lo || v > hi)
      throw std::out_of_range("BlockSequence: offset " + std::to_string(v) + " outside [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<std::size_t>(v - lo);
  }

  int n_max_ = 0;
  double tol_ = 0;
  double err_ = 0;
  std::vector<cplx> app_, apm_;
  std::vector<Mat2> blocks_;
};

inline BlockSequence build_block_sequence(int n_max, const ModelParams& p, double tol = kDefaultTol,
                                          unsigned workers = worker_count()) {
  if (n_max < 1) throw std::invalid_argument("build_block_sequence: n_max must be >= 1");
  if (!(tol > 0)) throw std::invalid_argument("build_block_sequence: tol must be positive");

  BlockSequence s;
  s.n_max_ = n_max;
  s.tol_ = tol;
  // A_pp for x = 0..n_max-1 and A_pm for y = -n_max..n_max-2 as one job list.
  const std::size_t n_pp = static_cast<std::size_t>(n_max);
  const std::size_t n_pm = static_cast<std::size_t>(2 * n_max - 1);
  std::vector<quad::QuadResult<cplx>> res(n_pp + n_pm);
  parallel_for(res.size(), [&](std::size_t j) {
    if (j < n_pp)
      res[j] = fourier_coefficient(static_cast<long>(j), Coefficient::PP, p, tol);
    else
      res[j] = fourier_coefficient(static_cast<long>(j - n_pp) - n_max, Coefficient::PM, p, tol);
  }, workers);
  for (std::size_t j = 0; j < res.size(); ++j) {
    if (!res[j].converged) {
      const bool pp = j < n_pp;
      const long x = pp ? static_cast<long>(j) : static_cast<long>(j - n_pp) - n_max;
      throw NumericalError("fourier", std::string(pp ? "A_pp" : "A_pm") + " at x=" + std::to_string(x) +
                                          " reached error " + std::to_string(res[j].error) +
                                          " > tol " + std::to_string(tol));
    }
    s.err_ = std::max(s.err_, res[j].error);
  }

  s.app_.resize(2 * n_pp - 1);
  for (std::size_t x = 0; x < n_pp; ++x) {
    s.app_[n_pp - 1 + x] = res[x].value;
    if (x > 0) s.app_[n_pp - 1 - x] = -res[x].value;
  }
  s.apm_.resize(n_pm);
  for (std::size_t j = 0; j < n_pm; ++j) s.apm_[j] = res[n_pp + j].value;

  s.blocks_.resize(2 * n_pp - 1);
  for (long x = -(n_max - 1); x <= n_max - 1; ++x)
    s.blocks_[x + n_max - 1] = BlockSequence::assemble_block(s.app(x), s.apm(x - 1), s.apm(-x - 1));
  return s;
}

// Sequences are immutable once built; one built at a larger n_max serves
// every smaller truncation, so the cache keeps the largest seen per key.
inline std::shared_ptr<const BlockSequence> cached_block_sequence(int n_max, const ModelParams& p,
                                                                  double tol = kDefaultTol) {
  using Key = std::tuple<double, double, double, double, double>;
  static std::mutex mu_lock;
  static std::map<Key, std::shared_ptr<const BlockSequence>> cache;
  const Key key{p.gamma(), p.lambda(), p.beta_l(), p.beta_r(), tol};
  {
    std::lock_guard lk(mu_lock);
    auto it = cache.find(key);
    if (it != cache.end() && it->second->n_max() >= n_max) return it->second;
  }
  auto seq = std::make_shared<const BlockSequence>(build_block_sequence(n_max, p, tol));
  std::lock_guard lk(mu_lock);
  auto& slot = cache[key];
  if (!slot || slot->n_max() < seq->n_max()) slot = seq;
  return slot;
}

}  // namespace xyness
