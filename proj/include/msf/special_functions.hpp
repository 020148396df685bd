#pragma once

#include <complex>

#include "msf/errors.hpp"

namespace msf::special {

template <typename T>
struct EvalResult {
  T value{};
  double abs_error_estimate = 0.0;
  int terms_used = 0;
};

/// Default relative tolerance of the series truncation rule.
inline constexpr double kSeriesTol = 1e-12;

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// Bessel function of the first kind J_alpha(x), alpha > -1, x >= 0.
///
/// Uses the ascending series while (x/2)^2 <= alpha + 1 and Miller's backward
/// recurrence normalized by sum_k (alpha+2k) Gamma(alpha+k)/k! J_{alpha+2k}(x)
/// = (x/2)^alpha otherwise.
EvalResult<double> bessel_j_eval(double alpha, double x);
double bessel_j(double alpha, double x);

/// ln I_alpha(x) for alpha > -1, x > 0 (returns -inf at x = 0 unless alpha = 0).
EvalResult<double> log_bessel_i_eval(double alpha, double x, double tol = 1e-15);
double log_bessel_i(double alpha, double x);

/// Modified Bessel function I_alpha(x). Throws OverflowError when the result
/// is not representable; use bessel_i_scaled for large arguments.
double bessel_i(double alpha, double x);

/// exp(-x) I_alpha(x).
double bessel_i_scaled(double alpha, double x);

/// ln( J_alpha(w) / (w/2)^alpha ) for complex w.
///
/// The ratio is an even entire function of w, so the result carries no branch
/// ambiguity. For |w|^2/4 > alpha + 1 the value comes from backward recurrence
/// in the order, anchored to the ascending series at an order >= |w|^2/4.
std::complex<double> log_reduced_bessel_j(double alpha, std::complex<double> w);

/// Generalized Laguerre polynomial L_m^alpha(rho) by the three-term recurrence.
double laguerre_poly(int m, double alpha, double rho);

/// Laguerre function I_{m+alpha,m}(rho)
///   = sqrt(m!/Gamma(m+alpha+1)) e^{-rho/2} rho^{alpha/2} L_m^alpha(rho).
double laguerre_fn(double alpha, int m, double rho);

/// Generates I_{alpha+m,m}(rho) for m = 0, 1, 2, ... using the recurrence for
/// the normalized polynomials sqrt(m!/Gamma(m+alpha+1)) L_m^alpha, with the
/// exponential prefactor applied in log space.
class LaguerreFunctionSequence {
 public:
  LaguerreFunctionSequence(double alpha, double rho);

  /// Value for the current index m.
  double value() const;
  int index() const noexcept { return m_; }
  void advance();

 private:
  void renormalize();

  double alpha_;
  double rho_;
  int m_ = 0;
  double prev_ = 0.0;   // normalized polynomial at m-1 (scaled)
  double cur_ = 1.0;    // normalized polynomial at m (scaled)
  double log_scale_ = 0.0;
  double log_prefactor_ = 0.0;
  bool vanishes_ = false;
};

}  // namespace msf::special
