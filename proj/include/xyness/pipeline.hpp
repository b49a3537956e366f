#pragma once

// End-to-end computation of log|C(n)| = log|Pf Omega(n)| over a list of n,
// with the determinant cross-check, singular-value extremes, a least-squares
// decay-rate fit and the bound report.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "xyness/bounds.hpp"
#include "xyness/errors.hpp"
#include "xyness/format.hpp"
#include "xyness/fourier.hpp"
#include "xyness/model.hpp"
#include "xyness/parallel.hpp"
#include "xyness/skewlinalg.hpp"
#include "xyness/toeplitz.hpp"

namespace xyness {

inline constexpr double kPfDetGate = 1e-6;
inline constexpr double kFitTolerance = 0.01;

struct SeriesRow {
  int n = 0;
  double log_abs_C = 0;
  double log_abs_det = 0;
  double pf_det_residual = 0;
  double smin = std::numeric_limits<double>::quiet_NaN();
  double smax = std::numeric_limits<double>::quiet_NaN();
  cplx pf_phase{1, 0};  // ordering-convention dependent; recorded, not interpreted
  // smallest singular value is at the rounding floor of the factorizations,
  // so log_abs_C overestimates the exact value
  bool resolution_limited = false;
};

struct DecayFit {
  int n_lo = 0, n_hi = 0;
  int points = 0;
  double slope = 0, intercept = 0, residual_rms = 0;
};

struct SeriesMetadata {
  double tol = kDefaultTol;
  bool swapped = false;
  double err_estimate = 0;
  std::string version = kVersion;
  std::string error;  // non-empty when the computation failed (sweeps)
};

struct CorrelationSeries {
  ModelParams params;
  std::vector<SeriesRow> rows;
  std::optional<DecayFit> fit;
  BoundReport bound;
  SeriesMetadata metadata;
};

struct SeriesOptions {
  bool singular_values = true;
  unsigned workers = worker_count();
  std::string dump_prefix;  // non-empty: write Omega(n) to <prefix>_n<N>.bin
};

// Powers of two from 8 up to n_max plus a uniform sample of the upper half,
// which is the default fit window.
inline std::vector<int> default_n_list(int n_max) {
  if (n_max < 1) throw std::invalid_argument("default_n_list: n_max must be >= 1");
  std::vector<int> out;
  for (int n = n_max < 8 ? 1 : 8; n <= n_max; n *= 2) out.push_back(n);
  const int lo = std::max(1, n_max / 2);
  const int step = std::max(1, n_max / 16);
  for (int n = lo; n <= n_max; n += step) out.push_back(n);
  out.push_back(n_max);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline DecayFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 4)
    throw std::invalid_argument("fit_decay: need at least 4 points in the fit window");
  const double m = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  DecayFit f;
  f.points = static_cast<int>(xs.size());
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (f.intercept + f.slope * xs[i]);
    ss += r * r;
  }
  f.residual_rms = std::sqrt(ss / m);
  return f;
}

inline DecayFit fit_decay(const CorrelationSeries& s, int n_lo, int n_hi) {
  std::vector<double> xs, ys;
  for (const auto& r : s.rows)
    if (r.n >= n_lo && r.n <= n_hi) {
      xs.push_back(r.n);
      ys.push_back(r.log_abs_C);
    }
  DecayFit f = fit_line(xs, ys);
  f.n_lo = n_lo;
  f.n_hi = n_hi;
  return f;
}

inline bool validate_weak_bound(const CorrelationSeries& s) {
  return std::all_of(s.rows.begin(), s.rows.end(),
                     [&](const SeriesRow& r) { return weak_bound_holds(r.n, r.log_abs_det, s.params); });
}

inline void check_n_list(const std::vector<int>& n_list) {
  if (n_list.empty()) throw std::invalid_argument("n_list must be nonempty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw std::invalid_argument("n_list entries must be >= 1");
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw std::invalid_argument("n_list must be strictly ascending");
  }
}

inline SeriesRow series_row(const TruncatedToeplitz& t, bool with_svd) {
  SeriesRow r;
  r.n = t.n;
  const LogScalar pf = pfaffian(t.entries);
  const LogScalar det = log_det(t.entries);
  r.log_abs_C = pf.log_abs;
  r.pf_phase = pf.phase;
  r.log_abs_det = det.log_abs;
  r.pf_det_residual = std::abs(2 * pf.log_abs - det.log_abs);
  if (pf.is_zero() && det.is_zero()) r.pf_det_residual = 0;
  if (!(r.pf_det_residual <= kPfDetGate))
    throw NumericalError("pfaffian/determinant", "n=" + std::to_string(t.n) + ": |2 log|Pf| - log|det|| = " +
                                                     std::to_string(r.pf_det_residual));
  if (with_svd) {
    const auto sv = singular_values(t.entries);
    r.smin = sv.front();
    r.smax = sv.back();
    const double floor = 64.0 * t.dim() * std::numeric_limits<double>::epsilon() * r.smax;
    r.resolution_limited = r.smin <= floor;
  }
  return r;
}

inline CorrelationSeries compute_series(const ModelParams& p, const std::vector<int>& n_list,
                                        double tol = kDefaultTol, const SeriesOptions& opt = {}) {
  check_n_list(n_list);
  CorrelationSeries s{p, {}, std::nullopt, {}, {}};
  s.metadata.tol = tol;
  s.metadata.swapped = p.swapped();
  s.bound = bound_report(p);

  const BlockSequence seq = build_block_sequence(n_list.back(), p, tol, opt.workers);
  s.metadata.err_estimate = seq.err_estimate();
  s.rows.resize(n_list.size());
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const TruncatedToeplitz t = assemble(n_list[i], seq);
    if (!opt.dump_prefix.empty())
      dump_binary(t.entries, opt.dump_prefix + "_n" + std::to_string(t.n) + ".bin");
    s.rows[i] = series_row(t, opt.singular_values);
  }

  const int n_max = n_list.back();
  const int lo = std::max(1, n_max / 2);
  const auto in_window = std::count_if(n_list.begin(), n_list.end(), [&](int n) { return n >= lo; });
  if (in_window >= 4) s.fit = fit_decay(s, lo, n_max);
  return s;
}

// Independent compute_series per grid point, results in input order. A
// failing point keeps its parameters and records the error in metadata.
inline std::vector<CorrelationSeries> sweep(const std::vector<ModelParams>& grid, const std::vector<int>& n_list,
                                            double tol = kDefaultTol, unsigned workers = worker_count()) {
  if (grid.empty()) throw std::invalid_argument("sweep: grid must be nonempty");
  check_n_list(n_list);
  std::vector<std::optional<CorrelationSeries>> out(grid.size());
  SeriesOptions inner;
  inner.workers = grid.size() >= workers ? 1u : workers;
  parallel_for(
      grid.size(),
      [&](std::size_t i) {
        try {
          out[i] = compute_series(grid[i], n_list, tol, inner);
        } catch (const std::exception& e) {
          CorrelationSeries failed{grid[i], {}, std::nullopt, {}, {}};
          failed.metadata.tol = tol;
          failed.metadata.swapped = grid[i].swapped();
          failed.metadata.error = e.what();
          out[i] = std::move(failed);
        }
      },
      workers);
  std::vector<CorrelationSeries> res;
  res.reserve(out.size());
  for (auto& s : out) res.push_back(std::move(*s));
  return res;
}

}  // namespace xyness
