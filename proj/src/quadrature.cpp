#include "msf/quadrature.hpp"

#include <numbers>
#include <stdexcept>

namespace msf::quad {

double envelope_cutoff(double power, double threshold) {
  const double log_thr = std::log(threshold);
  auto log_env = [power](double rho) { return -rho + (power > 0.0 ? power * std::log(rho) : 0.0); };
  double lo = std::max(power, 1.0);
  if (log_env(lo) < log_thr) {
    return lo;
  }
  double hi = lo + 40.0;
  while (log_env(hi) >= log_thr) {
    hi = lo + 2.0 * (hi - lo);
  }
  for (int i = 0; i < 200 && hi - lo > 1e-9 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (log_env(mid) >= log_thr ? lo : hi) = mid;
  }
  return hi;
}

namespace {

// Legendre P_n(x) and P_{n-1}(x) by the three-term recurrence.
std::pair<double, double> legendre_pair(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

}  // namespace

GaussLegendreRule gauss_legendre(int n, double a, double b) {
  if (n < 1) {
    throw std::invalid_argument("gauss_legendre: n must be positive");
  }
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [pn, pm] = legendre_pair(n, x);
      const double dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    const auto [pn, pm] = legendre_pair(n, x);
    const double dp = n * (x * pn - pm) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = w * half;
    rule.weights[n - 1 - i] = w * half;
  }
  return rule;
}

}  // namespace msf::quad
