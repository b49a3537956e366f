#pragma once

// Truncated block Toeplitz matrices T_n[a] = Omega(n): block (i, j) is a_{i-j}.

#include <Eigen/Dense>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "xyness/errors.hpp"
#include "xyness/fourier.hpp"
#include "xyness/model.hpp"

namespace xyness {

using MatX = Eigen::MatrixXcd;

struct TruncatedToeplitz {
  int n = 0;             // block rows
  MatX entries;          // 2n x 2n
  double source_err = 0; // err_estimate of the BlockSequence it came from

  int dim() const { return 2 * n; }
};

inline double skew_defect(const MatX& m) { return (m + m.transpose()).cwiseAbs().maxCoeff(); }

inline TruncatedToeplitz assemble(int n, const BlockSequence& seq) {
  if (n < 1) throw std::invalid_argument("assemble: n must be >= 1");
  if (n > seq.n_max())
    throw std::out_of_range("assemble: n=" + std::to_string(n) + " exceeds block sequence n_max=" +
                            std::to_string(seq.n_max()));
  TruncatedToeplitz t;
  t.n = n;
  t.source_err = seq.err_estimate();
  t.entries.resize(2 * n, 2 * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) t.entries.block<2, 2>(2 * i, 2 * j) = seq.block(i - j);
  const double defect = skew_defect(t.entries);
  if (!(defect <= 2 * seq.err_estimate() + 1e-15))
    throw NumericalError("toeplitz", "Omega(" + std::to_string(n) + ") not skew-symmetric: defect " +
                                         std::to_string(defect));
  return t;
}

// Grid approximation of ||a||_inf = ess sup_xi ||a(xi)|| = max_xi th(beta_R mu(xi)/2),
// with golden-section refinement of mu around the best grid point.
inline double symbol_norm(const ModelParams& p, int grid = 4096) {
  if (grid < 64) throw std::invalid_argument("symbol_norm: grid must be >= 64");
  const double h = kTwoPi / grid;
  int best = 0;
  double best_mu = -1;
  for (int k = 0; k < grid; ++k) {
    const double m = mu(k * h, p);
    if (m > best_mu) {
      best_mu = m;
      best = k;
    }
  }
  const double g = 0.5 * (std::sqrt(5.0) - 1);
  double a = (best - 1) * h, b = (best + 1) * h;
  double c = b - g * (b - a), d = a + g * (b - a);
  double mc = mu(c, p), md = mu(d, p);
  for (int it = 0; it < 80; ++it) {
    if (mc > md) {
      b = d;
      d = c;
      md = mc;
      c = b - g * (b - a);
      mc = mu(c, p);
    } else {
      a = c;
      c = d;
      mc = md;
      d = a + g * (b - a);
      md = mu(d, p);
    }
  }
  best_mu = std::max({best_mu, mc, md});
  return tanh_half(p.beta_r(), best_mu);
}

// Row-major (re, im) float64 pairs, little-endian.
inline void dump_binary(const MatX& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("dump_binary: cannot open " + path);
  auto put = [&](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    char buf[8];
    std::memcpy(buf, &bits, 8);
    out.write(buf, 8);
  };
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      put(m(i, j).real());
      put(m(i, j).imag());
    }
}

}  // namespace xyness
