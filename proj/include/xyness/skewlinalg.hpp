#pragma once

// Determinants, Pfaffians and singular values of dense complex matrices.
// Determinant and Pfaffian are returned as log-magnitude plus unit phase:
// det Omega(n) is of order e^{-c n} and underflows double long before the
// matrices become expensive.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "xyness/errors.hpp"

namespace xyness {

using cplx = std::complex<double>;
using MatX = Eigen::MatrixXcd;

struct LogScalar {
  double log_abs = 0;  // -inf encodes exact zero
  cplx phase{1, 0};

  static LogScalar zero() { return {-std::numeric_limits<double>::infinity(), {1, 0}}; }

  static LogScalar from_value(cplx v) {
    const double a = std::abs(v);
    if (a == 0) return zero();
    return {std::log(a), v / a};
  }

  bool is_zero() const { return log_abs == -std::numeric_limits<double>::infinity(); }

  cplx to_value() const { return is_zero() ? cplx{0, 0} : std::exp(log_abs) * phase; }

  LogScalar& operator*=(const LogScalar& o) {
    log_abs += o.log_abs;
    phase *= o.phase;
    phase /= std::abs(phase);  // keep |phase| = 1 against drift
    return *this;
  }
  friend LogScalar operator*(LogScalar a, const LogScalar& b) { return a *= b; }
  LogScalar squared() const { return *this * *this; }
};

inline void require_finite(const MatX& m, const char* stage) {
  if (!m.allFinite()) throw NumericalError(stage, "matrix has non-finite entries");
}

// LU with partial pivoting; log|det| accumulated from log|u_ii|.
inline LogScalar log_det(const MatX& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("log_det: matrix must be square");
  require_finite(m, "log_det");
  if (m.rows() == 0) return {};
  Eigen::PartialPivLU<MatX> lu(m);
  LogScalar out;
  out.phase = lu.permutationP().determinant();
  const auto& f = lu.matrixLU();
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    const cplx u = f(i, i);
    if (u == cplx(0, 0)) return LogScalar::zero();
    out *= LogScalar::from_value(u);
  }
  return out;
}

inline double default_skew_tol(const MatX& m) {
  return m.size() ? 1e-10 * m.cwiseAbs().maxCoeff() : 0.0;
}

// Pfaffian via Parlett-Reid tridiagonalization with full pivoting: at each
// step the largest remaining |A_ij| (i < j) is moved to position (k, k+1)
// by two symmetric transpositions, each flipping the sign. Pass skew_tol < 0
// for the default 1e-10 * max|M|.
inline LogScalar pfaffian(const MatX& m, double skew_tol = -1) {
  if (m.rows() != m.cols()) throw std::invalid_argument("pfaffian: matrix must be square");
  require_finite(m, "pfaffian");
  if (m.size() == 0) return {};
  if (skew_tol < 0) skew_tol = default_skew_tol(m);
  const double defect = (m + m.transpose()).cwiseAbs().maxCoeff();
  if (!(defect <= skew_tol))
    throw NumericalError("pfaffian", "input not skew-symmetric: |M + M^T| = " + std::to_string(defect) +
                                         " > " + std::to_string(skew_tol));
  const Eigen::Index n = m.rows();
  if (n % 2 == 1) return LogScalar::zero();
  MatX a = 0.5 * (m - m.transpose());
  LogScalar pf;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index pi = k, pj = k + 1;
    double best = -1;
    for (Eigen::Index j = k + 1; j < n; ++j)
      for (Eigen::Index i = k; i < j; ++i) {
        const double v = std::norm(a(i, j));
        if (v > best) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    if (best == 0) return LogScalar::zero();
    if (pi != k) {
      a.row(k).swap(a.row(pi));
      a.col(k).swap(a.col(pi));
      pf.phase = -pf.phase;
    }
    if (pj != k + 1) {
      a.row(k + 1).swap(a.row(pj));
      a.col(k + 1).swap(a.col(pj));
      pf.phase = -pf.phase;
    }
    const cplx pivot = a(k, k + 1);
    pf *= LogScalar::from_value(pivot);
    const Eigen::Index rest = n - k - 2;
    if (rest > 0) {
      const Eigen::VectorXcd tau = a.row(k).segment(k + 2, rest).transpose() / pivot;
      const Eigen::VectorXcd col = a.col(k + 1).segment(k + 2, rest);
      a.bottomRightCorner(rest, rest).noalias() += tau * col.transpose();
      a.bottomRightCorner(rest, rest).noalias() -= col * tau.transpose();
    }
  }
  return pf;
}

// All singular values, ascending. Divide-and-conquer bidiagonal SVD
// (backward stable; values only).
inline std::vector<double> singular_values(const MatX& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("singular_values: matrix must be square");
  require_finite(m, "singular_values");
  if (m.size() == 0) return {};
  Eigen::BDCSVD<MatX> svd(m);
  const auto& s = svd.singularValues();
  std::vector<double> out(s.data(), s.data() + s.size());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace xyness
