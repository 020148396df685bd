#pragma once
// Extended-precision reference implementations used only by the tests.
// They follow the textbook power-series definitions directly and share no
// code with the library.

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <complex>

namespace oracle {

using mp = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<160>>;

inline mp gamma(const mp& x) { return boost::math::tgamma(x); }

/// J_alpha(x) = sum_k (-1)^k (x/2)^{alpha+2k} / (k! Gamma(alpha+k+1)).
inline double bessel_j(double alpha, double x, int terms = 600) {
  const mp a(alpha);
  const mp h = mp(x) / 2;
  mp term = pow(h, a) / gamma(a + 1);
  mp sum = term;
  const mp q = -h * h;
  for (int k = 0; k < terms; ++k) {
    term *= q / ((k + 1) * (a + k + 1));
    sum += term;
  }
  return static_cast<double>(sum);
}

/// I_alpha(x) = sum_k (x/2)^{alpha+2k} / (k! Gamma(alpha+k+1)), as log.
inline double log_bessel_i(double alpha, double x, int terms = 600) {
  const mp a(alpha);
  const mp h = mp(x) / 2;
  mp term = pow(h, a) / gamma(a + 1);
  mp sum = term;
  const mp q = h * h;
  for (int k = 0; k < terms; ++k) {
    term *= q / ((k + 1) * (a + k + 1));
    sum += term;
  }
  return static_cast<double>(log(sum));
}

inline double log_gamma(double x) { return static_cast<double>(log(gamma(mp(x)))); }

/// L_m^alpha(rho) from the expansion of the Rodrigues formula:
///   sum_i (-1)^i binom(m+alpha, m-i) rho^i / i!.
inline mp laguerre_explicit(int m, double alpha, double rho) {
  const mp a(alpha);
  const mp r(rho);
  mp sum = 0;
  for (int i = 0; i <= m; ++i) {
    const mp binom = gamma(a + m + 1) / (gamma(mp(m - i + 1)) * gamma(a + i + 1));
    mp term = binom * pow(r, i) / gamma(mp(i + 1));
    sum += (i % 2 == 0) ? term : mp(-term);
  }
  return sum;
}

/// I_{m+alpha,m}(rho) with every factor in extended precision.
inline double laguerre_fn(double alpha, int m, double rho) {
  const mp a(alpha);
  const mp r(rho);
  const mp norm = sqrt(gamma(mp(m + 1)) / gamma(a + m + 1));
  return static_cast<double>(norm * exp(-r / 2) * pow(r, a / 2) * laguerre_explicit(m, alpha, rho));
}

/// J_alpha(w)/(w/2)^alpha = sum_k (-w^2/4)^k / (k! Gamma(alpha+k+1)) for complex w.
inline std::complex<double> reduced_bessel_j(double alpha, std::complex<double> w, int terms = 400) {
  const mp a(alpha);
  // q = -w^2/4
  const mp wr(w.real()), wi(w.imag());
  const mp qr = -(wr * wr - wi * wi) / 4;
  const mp qi = -(2 * wr * wi) / 4;
  mp tr = 1 / gamma(a + 1), ti = 0;
  mp sr = tr, si = 0;
  for (int k = 0; k < terms; ++k) {
    const mp d = (k + 1) * (a + k + 1);
    const mp nr = (tr * qr - ti * qi) / d;
    const mp ni = (tr * qi + ti * qr) / d;
    tr = nr;
    ti = ni;
    sr += tr;
    si += ti;
  }
  return {static_cast<double>(sr), static_cast<double>(si)};
}

}  // namespace oracle
