#pragma once

// Globally adaptive panel quadrature on [a, b] with user-supplied breakpoints.
//
// Each panel is integrated with a fixed Gauss-Legendre rule; the error
// estimate of a panel is |G(panel) - G(left half) - G(right half)| and the
// refined (two-half) value is the one kept. The panel with the largest
// estimate is bisected until the summed estimate meets the tolerance or the
// panel budget runs out. Bisecting by largest error (rather than splitting
// the tolerance per level) is what makes integrable endpoint singularities
// such as log|x - x0| converge.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <type_traits>
#include <vector>

namespace xyness::quad {

template <std::size_t N>
struct GaussLegendre {
  std::array<double, N> nodes{};    // on [-1, 1], ascending
  std::array<double, N> weights{};

  GaussLegendre() {
    for (std::size_t i = 0; i < N; ++i) {
      long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (N + 0.5L));
      long double dp = 0;
      for (int it = 0; it < 100; ++it) {
        long double p0 = 1, p1 = x;
        for (std::size_t k = 2; k <= N; ++k) {
          long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = N * (x * p1 - p0) / (x * x - 1);
        long double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-19L) break;
      }
      long double p0 = 1, p1 = x;
      for (std::size_t k = 2; k <= N; ++k) {
        long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = N * (x * p1 - p0) / (x * x - 1);
      nodes[N - 1 - i] = static_cast<double>(x);
      weights[N - 1 - i] = static_cast<double>(2 / ((1 - x * x) * dp * dp));
    }
  }

  static const GaussLegendre& instance() {
    static const GaussLegendre rule;
    return rule;
  }
};

inline constexpr std::size_t kOrder = 40;

template <class T>
struct QuadResult {
  T value{};
  double error = 0;     // summed panel error estimates
  std::size_t panels = 0;
  bool converged = false;
};

struct QuadOptions {
  double tol = 1e-12;              // absolute
  std::size_t max_panels = 20000;
  double max_panel_length = 0;     // > 0: pre-split panels to at most this length
};

template <class F>
auto gauss_panel(F& f, double a, double b) {
  using T = std::decay_t<decltype(f(a))>;
  const auto& rule = GaussLegendre<kOrder>::instance();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  T sum{};
  for (std::size_t i = 0; i < kOrder; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return T(sum * half);
}

// Integrates f over [breaks.front(), breaks.back()]; f must be smooth on the
// open intervals between consecutive breakpoints.
template <class F>
auto integrate(F&& f, std::span<const double> breaks, const QuadOptions& opt = {}) {
  using T = std::decay_t<decltype(f(0.0))>;
  struct Panel {
    double a, b;
    T left, right;
    double err;
  };
  auto make = [&](double a, double b, T whole) {
    const double m = 0.5 * (a + b);
    Panel p{a, b, gauss_panel(f, a, m), gauss_panel(f, m, b), 0};
    p.err = std::abs(whole - (p.left + p.right));
    return p;
  };
  auto heap_less = [](const Panel& x, const Panel& y) {
    return x.err < y.err || (x.err == y.err && x.a > y.a);
  };

  std::vector<Panel> heap;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k], b = breaks[k + 1];
    if (!(b > a)) continue;
    std::size_t pieces = 1;
    if (opt.max_panel_length > 0) pieces = static_cast<std::size_t>(std::ceil((b - a) / opt.max_panel_length));
    pieces = std::max<std::size_t>(pieces, 1);
    for (std::size_t j = 0; j < pieces; ++j) {
      const double pa = a + (b - a) * j / pieces;
      const double pb = (j + 1 == pieces) ? b : a + (b - a) * (j + 1) / pieces;
      heap.push_back(make(pa, pb, gauss_panel(f, pa, pb)));
    }
  }
  std::make_heap(heap.begin(), heap.end(), heap_less);

  double total = 0;
  for (const auto& p : heap) total += p.err;
  const std::size_t budget = std::max(opt.max_panels, heap.size());
  while (total > opt.tol && heap.size() < budget) {
    std::pop_heap(heap.begin(), heap.end(), heap_less);
    Panel p = heap.back();
    heap.pop_back();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) {  // cannot bisect further in double
      heap.push_back(p);
      std::push_heap(heap.begin(), heap.end(), heap_less);
      break;
    }
    Panel l = make(p.a, m, p.left);
    Panel r = make(m, p.b, p.right);
    total += l.err + r.err - p.err;
    heap.push_back(l);
    std::push_heap(heap.begin(), heap.end(), heap_less);
    heap.push_back(r);
    std::push_heap(heap.begin(), heap.end(), heap_less);
  }

  // Fixed left-to-right summation order keeps results reproducible.
  std::sort(heap.begin(), heap.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  QuadResult<T> out;
  out.error = 0;
  for (const auto& p : heap) {
    out.value += p.left + p.right;
    out.error += p.err;
  }
  out.panels = heap.size();
  out.converged = out.error <= opt.tol;
  return out;
}

template <class F>
auto integrate(F&& f, std::initializer_list<double> breaks, const QuadOptions& opt = {}) {
  std::vector<double> b(breaks);
  return integrate(std::forward<F>(f), std::span<const double>(b), opt);
}

}  // namespace xyness::quad
