#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

namespace msf::quad {

template <typename T>
struct QuadResult {
  T value{};
  double abs_error = 0.0;
  int evaluations = 0;
  int panels = 0;
  bool converged = false;
};

struct QuadOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  int max_panels = 4000;
  int initial_panels = 8;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
struct Panel {
  double a, b;
  T value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename T, typename F>
Panel<T> gauss_kronrod_15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * kKronrodWeights[7];
  T gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const T fsum = f(center - dx) + f(center + dx);
    kronrod += fsum * kKronrodWeights[i];
    if (i % 2 == 1) {
      gauss += fsum * kGaussWeights[i / 2];
    }
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate falls below max(abs_tol, rel_tol * |I|) or the panel budget is
/// exhausted. The per-panel estimate is |K15 - G7|, which overestimates the
/// true error of smooth integrands by several orders of magnitude.
template <typename T = double, typename F>
QuadResult<T> integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
  QuadResult<T> res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  std::priority_queue<detail::Panel<T>> queue;
  const int n0 = std::max(1, opt.initial_panels);
  T total{};
  double err = 0.0;
  for (int i = 0; i < n0; ++i) {
    const double lo = a + (b - a) * i / n0;
    const double hi = i + 1 == n0 ? b : a + (b - a) * (i + 1) / n0;
    auto p = detail::gauss_kronrod_15<T>(f, lo, hi);
    total += p.value;
    err += p.error;
    queue.push(p);
  }
  res.evaluations = 15 * n0;
  while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) &&
         static_cast<int>(queue.size()) < opt.max_panels) {
    const auto worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // panel no longer representable; keep it and stop refining
      queue.push(worst);
      break;
    }
    auto left = detail::gauss_kronrod_15<T>(f, worst.a, mid);
    auto right = detail::gauss_kronrod_15<T>(f, mid, worst.b);
    res.evaluations += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  // Re-sum from the panels to drop the cancellation noise of the running update.
  total = T{};
  err = 0.0;
  res.panels = static_cast<int>(queue.size());
  while (!queue.empty()) {
    total += queue.top().value;
    err += queue.top().error;
    queue.pop();
  }
  res.value = total;
  res.abs_error = err;
  res.converged = err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
  return res;
}

/// Smallest rho beyond the peak of exp(-rho) * rho^power where the envelope
/// drops below `threshold`.
double envelope_cutoff(double power, double threshold = 1e-16);

/// n-point Gauss-Legendre rule on [a, b].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(int n, double a, double b);

}  // namespace msf::quad
