#include <cmath>
#include <limits>

#include "msf/coherent.hpp"
#include "msf/series.hpp"
#include "msf/special_functions.hpp"

namespace msf::coherent {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_uv(double alpha, double u, double v, const char* fn) {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) {
    throw DomainError(std::string(fn) + ": order must satisfy alpha > -1");
  }
  if (!(u > 0.0) || !(v > 0.0) || !std::isfinite(u) || !std::isfinite(v)) {
    throw DomainError(std::string(fn) + ": arguments must be finite and > 0");
  }
}

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

cd y_series(double alpha, cd z1, cd z2, double rho) {
  if (z2 == 0.0) {
    return alpha > 0.0 ? cd(0.0) : cd(special::laguerre_fn(alpha, 0, rho));
  }
  if (rho == 0.0) {
    if (alpha > 0.0) return 0.0;
    if (alpha == 0.0) return std::exp(z1 * z2);
  }
  const cd w = z1 * z2;
  const double lw = std::log(std::abs(w));
  const double aw = std::abs(w);
  const double lz2 = std::log(std::abs(z2));
  const double arg_w = std::arg(w);
  const double arg_z2 = std::arg(z2);
  special::LaguerreFunctionSequence seq(alpha, rho);
  cd sum = 0.0;
  for (int m = 0; m < 200000; ++m) {
    const double log_coef = (m > 0 ? m * lw : 0.0) + alpha * lz2 -
                            0.5 * (special::log_gamma(m + 1.0) + special::log_gamma(m + alpha + 1.0));
    sum += std::exp(log_coef) * std::polar(1.0, m * arg_w + alpha * arg_z2) * seq.value();
    if (w == 0.0) break;
    // |I_{m+alpha,m}| <= 1 and the coefficient ratios decrease, so the tail is geometric.
    const double r = aw / std::sqrt((m + 1.0) * (m + alpha + 1.0));
    if (r < 0.5) {
      const double tail = std::exp(log_coef) * r / (1.0 - r);
      if (tail < 1e-17 * std::abs(sum) || tail < 1e-300) break;
    }
    seq.advance();
  }
  return sum;
}

cd y_closed(double alpha, cd z1, cd z2, double rho) {
  if (z1 == 0.0 && alpha != 0.0) {
    throw BranchError("y_fn: closed form needs (z2/z1)^{alpha/2}, undefined at z1 = 0");
  }
  if (rho == 0.0 || z2 == 0.0) {
    if (alpha > 0.0) return 0.0;
    if (alpha == 0.0) return std::exp(z1 * z2 - 0.5 * rho);
  }
  const cd w = 2.0 * std::sqrt(z1 * z2 * rho);
  const cd log_y = z1 * z2 - 0.5 * rho + alpha * std::log(z2) + 0.5 * alpha * std::log(rho) +
                   special::log_reduced_bessel_j(alpha, w);
  return std::exp(log_y);
}

// log of the T-integrand 2 e^{-(t-u)^2} (t/u)^alpha e^{-2ut} I_alpha(2ut) t
double log_t_integrand(double alpha, double u, double t) {
  const double x = 2.0 * u * t;
  return std::log(2.0) - (t - u) * (t - u) + alpha * std::log(t / u) + (special::log_bessel_i(alpha, x) - x) +
         std::log(t);
}

quad::QuadResult<double> integrate_t(double alpha, double u, double a, double b) {
  quad::QuadOptions opt;
  opt.abs_tol = 1e-300;
  opt.rel_tol = 1e-14;
  opt.initial_panels = 8;
  opt.max_panels = 20000;
  auto f = [&](double t) { return std::exp(log_t_integrand(alpha, u, t)); };
  return quad::integrate(f, a, b, opt);
}

double upper_cut(double u, double v) { return std::max(u, v) + 12.0; }

}  // namespace

cd y_fn(double alpha, cd z1, cd z2, double rho, YMode mode) {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) {
    throw DomainError("y_fn: order must satisfy alpha > -1");
  }
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw DomainError("y_fn: rho must be finite and >= 0");
  }
  return mode == YMode::series ? y_series(alpha, z1, z2, rho) : y_closed(alpha, z1, z2, rho);
}

double log_q_boundary(double alpha, double u, double v) {
  check_uv(alpha, u, v, "q_fn");
  return alpha * std::log(v / u) + special::log_bessel_i(alpha, 2.0 * u * v);
}

special::EvalResult<double> log_q_minus_eval(double alpha, double u, double v, double tol) {
  check_uv(alpha, u, v, "q_minus");
  const double lr = std::log(v / u);
  const double x = 2.0 * u * v;
  special::LogSeriesAccumulator acc(tol);
  for (int l = 1; l < 100000; ++l) {
    if (acc.add_log((alpha + l) * lr + special::log_bessel_i(alpha + l, x))) {
      break;
    }
  }
  if (!acc.converged()) {
    throw ConvergenceError("q_minus: series did not converge", std::exp(acc.log_tail_bound() - acc.log_sum()));
  }
  special::EvalResult<double> r;
  r.value = acc.log_sum();
  r.abs_error_estimate = std::exp(acc.log_tail_bound() - acc.log_sum()) + 1e-15 * acc.terms();
  r.terms_used = acc.terms();
  return r;
}

double log_q_minus(double alpha, double u, double v) { return log_q_minus_eval(alpha, u, v).value; }

double q_minus(double alpha, double u, double v) {
  const double lv = log_q_minus(alpha, u, v);
  if (lv > 709.0) {
    throw OverflowError("q_minus: value exceeds double range; use log_q_minus");
  }
  return std::exp(lv);
}

quad::QuadResult<double> t_fn_eval(double alpha, double u, double v) {
  check_uv(alpha, u, v, "t_fn");
  if (v >= u) {
    return integrate_t(alpha, u, v, upper_cut(u, v));
  }
  auto r = integrate_t(alpha, u, 0.0, v);
  r.value = 1.0 - r.value;
  return r;
}

quad::QuadResult<double> one_minus_t_eval(double alpha, double u, double v) {
  check_uv(alpha, u, v, "t_fn");
  if (v < u) {
    return integrate_t(alpha, u, 0.0, v);
  }
  auto r = integrate_t(alpha, u, v, upper_cut(u, v));
  r.value = 1.0 - r.value;
  return r;
}

namespace {

double checked(const quad::QuadResult<double>& r, const char* fn) {
  if (!r.converged) {
    throw ConvergenceError(std::string(fn) + ": quadrature did not converge", r.abs_error);
  }
  return r.value;
}

}  // namespace

double t_fn(double alpha, double u, double v) { return checked(t_fn_eval(alpha, u, v), "t_fn"); }

double one_minus_t(double alpha, double u, double v) {
  return checked(one_minus_t_eval(alpha, u, v), "one_minus_t");
}

double log_q_fn(double alpha, double u, double v) {
  return log_add(log_q_minus(alpha, u, v), log_q_boundary(alpha, u, v));
}

double q_fn(double alpha, double u, double v) {
  const double lv = log_q_fn(alpha, u, v);
  if (lv > 709.0) {
    throw OverflowError("q_fn: value exceeds double range; use log_q_fn");
  }
  return std::exp(lv);
}

double q_tilde(double alpha, double u, double v) {
  return one_minus_t(alpha, u, v) + std::exp(log_q_boundary(alpha, u, v) - u * u - v * v);
}

double delta_fn(double alpha, double u, double v) {
  const double lm = log_q_minus(alpha, u, v);
  const double lb = log_q_boundary(alpha, u, v);
  // Q^- / (Q^- + B) = 1 / (1 + e^{lb - lm})
  return 1.0 / (1.0 + std::exp(lb - lm));
}

}  // namespace msf::coherent
