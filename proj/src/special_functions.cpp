#include "msf/special_functions.hpp"

#include <math.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "msf/series.hpp"

namespace msf::special {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kRescale = 1e200;
constexpr double kLogMax = 709.0;

void check_order(double alpha, const char* fn) {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) {
    throw DomainError(std::string(fn) + ": order must satisfy alpha > -1");
  }
}

void check_argument(double x, const char* fn) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(fn) + ": argument must be finite and >= 0");
  }
}

int miller_start(double alpha, double x) {
  const double gap = std::max(x - alpha, 0.0);
  return static_cast<int>(std::ceil(gap + 30.0 + 8.0 * std::cbrt(x)));
}

EvalResult<double> bessel_j_series(double alpha, double x) {
  // sum_k (-(x/2)^2)^k / (k! (alpha+1)_k), times (x/2)^alpha / Gamma(alpha+1)
  const double q = -0.25 * x * x;
  SeriesAccumulator<double> acc(1e-16);
  double term = 1.0;
  double magnitude = 0.0;
  for (int k = 0; k < 1000; ++k) {
    magnitude += std::abs(term);
    if (acc.add(term)) {
      break;
    }
    term *= q / ((k + 1.0) * (alpha + k + 1.0));
  }
  const double log_prefactor = alpha * std::log(0.5 * x) - log_gamma(alpha + 1.0);
  const double prefactor = std::exp(log_prefactor);
  EvalResult<double> r;
  r.value = prefactor * acc.sum();
  r.abs_error_estimate = prefactor * (acc.tail_bound() + 4.0 * kEps * magnitude);
  r.terms_used = acc.terms();
  return r;
}

EvalResult<double> bessel_j_miller(double alpha, double x) {
  const int top = miller_start(alpha, x);
  double next = 0.0;  // p_{k+1}
  double cur = 1.0;  // p_k
  double norm = 0.0;
  double norm_mag = 0.0;
  // normalization weights c_i / Gamma(alpha+1), i = k/2
  std::vector<double> weight(top / 2 + 1);
  weight[0] = 1.0;
  double rising = 1.0;
  for (int i = 1; i <= top / 2; ++i) {
    rising *= (alpha + i) / i;
    weight[i] = (alpha + 2.0 * i) / (alpha + i) * rising;
  }
  for (int k = top; k >= 1; --k) {
    if (k % 2 == 0) {
      norm += weight[k / 2] * cur;
      norm_mag += std::abs(weight[k / 2] * cur);
    }
    const double prev = 2.0 * (alpha + k) / x * cur - next;
    next = cur;
    cur = prev;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      next /= kRescale;
      norm /= kRescale;
      norm_mag /= kRescale;
    }
  }
  norm += cur;
  norm_mag += std::abs(cur);
  const double log_prefactor = alpha * std::log(0.5 * x) - log_gamma(alpha + 1.0);
  const double ratio = cur / norm;
  EvalResult<double> r;
  r.value = ratio * std::exp(log_prefactor);
  r.abs_error_estimate = std::abs(r.value) * 8.0 * kEps * top +
                         std::exp(log_prefactor) * std::abs(ratio) * kEps * norm_mag / std::abs(norm) * top;
  r.terms_used = top;
  return r;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("log_gamma: argument must be > 0");
  }
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

EvalResult<double> bessel_j_eval(double alpha, double x) {
  check_order(alpha, "bessel_j");
  check_argument(x, "bessel_j");
  if (x == 0.0) {
    if (alpha == 0.0) {
      return {1.0, 0.0, 1};
    }
    if (alpha > 0.0) {
      return {0.0, 0.0, 1};
    }
    throw DomainError("bessel_j: J_alpha(0) is infinite for -1 < alpha < 0");
  }
  if (0.25 * x * x <= alpha + 1.0 || x <= 1.0) {
    return bessel_j_series(alpha, x);
  }
  return bessel_j_miller(alpha, x);
}

double bessel_j(double alpha, double x) { return bessel_j_eval(alpha, x).value; }

EvalResult<double> log_bessel_i_eval(double alpha, double x, double tol) {
  check_order(alpha, "bessel_i");
  check_argument(x, "bessel_i");
  if (x == 0.0) {
    if (alpha == 0.0) {
      return {0.0, 0.0, 1};
    }
    if (alpha > 0.0) {
      return {-std::numeric_limits<double>::infinity(), 0.0, 1};
    }
    throw DomainError("bessel_i: I_alpha(0) is infinite for -1 < alpha < 0");
  }
  // All terms are positive: track them as mantissa * exp(log_scale).
  const double q = 0.25 * x * x;
  const double log_first = alpha * std::log(0.5 * x) - log_gamma(alpha + 1.0);
  SeriesAccumulator<double> acc(tol);
  double term = 1.0;
  double log_scale = log_first;
  for (int k = 0; k < 1000000; ++k) {
    if (acc.add(term)) {
      break;
    }
    term *= q / ((k + 1.0) * (alpha + k + 1.0));
    if (term > kRescale) {
      acc.rescale(1.0 / kRescale);
      term /= kRescale;
      log_scale += std::log(kRescale);
    }
  }
  EvalResult<double> r;
  r.value = log_scale + std::log(acc.sum());
  r.abs_error_estimate = acc.tail_bound() / acc.sum() + 4.0 * kEps * acc.terms();
  r.terms_used = acc.terms();
  return r;
}

double log_bessel_i(double alpha, double x) { return log_bessel_i_eval(alpha, x).value; }

double bessel_i(double alpha, double x) {
  const double lv = log_bessel_i(alpha, x);
  if (lv > kLogMax) {
    throw OverflowError("bessel_i: result exceeds double range; use bessel_i_scaled");
  }
  return std::exp(lv);
}

double bessel_i_scaled(double alpha, double x) { return std::exp(log_bessel_i(alpha, x) - x); }

std::complex<double> log_reduced_bessel_j(double alpha, std::complex<double> w) {
  using cd = std::complex<double>;
  check_order(alpha, "log_reduced_bessel_j");
  const double aw = std::abs(w);
  if (!std::isfinite(aw)) {
    throw DomainError("log_reduced_bessel_j: non-finite argument");
  }
  const cd q = 0.25 * w * w;
  const double aq = std::abs(q);
  // series for the reduced function at order nu; cancellation is mild once nu >= |w|^2/4
  auto series = [&](double nu) {
    SeriesAccumulator<cd> acc(1e-17);
    cd term = 1.0;
    for (int k = 0; k < 100000; ++k) {
      if (acc.add(term)) {
        break;
      }
      term *= -q / ((k + 1.0) * (nu + k + 1.0));
    }
    return std::log(acc.sum()) - log_gamma(nu + 1.0);
  };
  if (aq <= alpha + 1.0) {
    return series(alpha);
  }
  // Backward recurrence  R_{nu-1} = nu R_nu - (w^2/4) R_{nu+1}  for R_nu = J_nu(w) / (w/2)^nu,
  // anchored to the series at order alpha + n.
  const int n = static_cast<int>(std::ceil(aq - alpha));
  const int top = n + 40 + static_cast<int>(4.0 * std::sqrt(aq));
  cd next = 0.0;
  cd cur = 1.0;
  double log_scale = 0.0;
  cd anchor = 0.0;
  double anchor_scale = 0.0;
  for (int k = top; k >= 1; --k) {
    if (k == n) {
      anchor = cur;
      anchor_scale = log_scale;
    }
    const cd prev = (alpha + k) * cur - q * next;
    next = cur;
    cur = prev;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      next /= kRescale;
      log_scale += std::log(kRescale);
    }
  }
  return std::log(cur) - std::log(anchor) + (log_scale - anchor_scale) + series(alpha + n);
}

double laguerre_poly(int m, double alpha, double rho) {
  check_order(alpha, "laguerre_poly");
  check_argument(rho, "laguerre_poly");
  if (m < 0) {
    throw DomainError("laguerre_poly: degree must be >= 0");
  }
  double prev = 1.0;
  if (m == 0) {
    return prev;
  }
  double cur = 1.0 + alpha - rho;
  for (int k = 1; k < m; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - rho) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  if (!std::isfinite(cur)) {
    throw OverflowError("laguerre_poly: result exceeds double range");
  }
  return cur;
}

LaguerreFunctionSequence::LaguerreFunctionSequence(double alpha, double rho) : alpha_(alpha), rho_(rho) {
  check_order(alpha, "laguerre_fn");
  check_argument(rho, "laguerre_fn");
  if (rho == 0.0) {
    if (alpha < 0.0) {
      throw DomainError("laguerre_fn: I_{m+alpha,m}(0) is infinite for alpha < 0");
    }
    vanishes_ = alpha > 0.0;
    log_prefactor_ = 0.0;
  } else {
    log_prefactor_ = -0.5 * rho + 0.5 * alpha * std::log(rho);
  }
  log_scale_ = -0.5 * log_gamma(alpha + 1.0);
}

double LaguerreFunctionSequence::value() const {
  if (vanishes_ || cur_ == 0.0) {
    return 0.0;
  }
  const double lv = log_scale_ + log_prefactor_ + std::log(std::abs(cur_));
  return std::copysign(std::exp(lv), cur_);
}

void LaguerreFunctionSequence::advance() {
  const double k = m_;
  const double next = ((2.0 * k + 1.0 + alpha_ - rho_) * cur_ - std::sqrt(k * (k + alpha_)) * prev_) /
                      std::sqrt((k + 1.0) * (k + alpha_ + 1.0));
  prev_ = cur_;
  cur_ = next;
  ++m_;
  renormalize();
}

void LaguerreFunctionSequence::renormalize() {
  const double mag = std::max(std::abs(cur_), std::abs(prev_));
  if (mag > kRescale || (mag < 1.0 / kRescale && mag > 0.0)) {
    const int e = std::ilogb(mag);
    cur_ = std::scalbn(cur_, -e);
    prev_ = std::scalbn(prev_, -e);
    log_scale_ += e * std::numbers::ln2;
  }
}

double laguerre_fn(double alpha, int m, double rho) {
  if (m < 0) {
    throw DomainError("laguerre_fn: index must be >= 0");
  }
  LaguerreFunctionSequence seq(alpha, rho);
  for (int k = 0; k < m; ++k) {
    seq.advance();
  }
  return seq.value();
}

}  // namespace msf::special
