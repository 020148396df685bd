#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace msf::special {

/// Truncation rule shared by every infinite series in the library.
///
/// A series is considered converged once three consecutive terms are below
/// `tol * |partial sum|` and the geometric tail bound `|t| r / (1 - r)` built
/// from the last observed term ratio r < 1 is also below `tol * |partial sum|`.
/// Requiring r < 1 keeps the rule from stopping on a plateau before the
/// dominant terms of a slowly growing series have entered.
template <typename T>
class SeriesAccumulator {
 public:
  explicit SeriesAccumulator(double tol = 1e-12) : tol_(tol) {}

  /// Adds one term; returns true once the truncation rule is satisfied.
  bool add(const T& term) {
    sum_ += term;
    ++terms_;
    const double mag = std::abs(term);
    const double total = std::abs(sum_);
    double ratio = 1.0;
    if (prev_mag_ > 0.0) {
      ratio = mag / prev_mag_;
    } else if (mag == 0.0) {
      ratio = 0.0;
    }
    prev_mag_ = mag;

    if (mag == 0.0 && total == 0.0) {
      small_run_++;
      tail_ = 0.0;
      return converged_ = small_run_ >= 3;
    }
    if (mag < tol_ * total) {
      small_run_++;
    } else {
      small_run_ = 0;
    }
    tail_ = ratio < 1.0 ? mag * ratio / (1.0 - ratio) : std::numeric_limits<double>::infinity();
    converged_ = small_run_ >= 3 && ratio < 1.0 && tail_ < tol_ * total;
    return converged_;
  }

  /// Multiplies the partial sum (and the remembered last term) by `factor`;
  /// used by callers that keep the terms in a rescaled representation.
  void rescale(double factor) {
    sum_ *= factor;
    prev_mag_ *= factor;
  }

  const T& sum() const noexcept { return sum_; }
  int terms() const noexcept { return terms_; }
  bool converged() const noexcept { return converged_; }
  /// Geometric bound on the omitted tail (infinite until the terms decrease).
  double tail_bound() const noexcept { return tail_; }

 private:
  double tol_;
  T sum_{};
  int terms_ = 0;
  int small_run_ = 0;
  double prev_mag_ = 0.0;
  double tail_ = std::numeric_limits<double>::infinity();
  bool converged_ = false;
};

/// Same truncation rule for series of positive terms supplied as logarithms.
/// The running sum is kept as `exp(log_scale) * mantissa` so the terms may be
/// far outside the double range.
class LogSeriesAccumulator {
 public:
  explicit LogSeriesAccumulator(double tol = 1e-12) : tol_(tol) {}

  bool add_log(double log_term) {
    ++terms_;
    if (log_term == -std::numeric_limits<double>::infinity()) {
      small_run_++;
      prev_log_ = log_term;
      tail_log_ = log_term;
      return converged_ = small_run_ >= 3;
    }
    if (mantissa_ == 0.0) {
      scale_ = log_term;
      mantissa_ = 1.0;
    } else if (log_term > scale_) {
      mantissa_ = mantissa_ * std::exp(scale_ - log_term) + 1.0;
      scale_ = log_term;
    } else {
      mantissa_ += std::exp(log_term - scale_);
    }
    const double log_sum = scale_ + std::log(mantissa_);
    const double log_ratio = log_term - prev_log_;
    prev_log_ = log_term;
    const double log_tol = std::log(tol_);
    if (log_term < log_tol + log_sum) {
      small_run_++;
    } else {
      small_run_ = 0;
    }
    if (log_ratio < 0.0) {
      const double r = std::exp(log_ratio);
      tail_log_ = log_term + log_ratio - std::log1p(-r);
    } else {
      tail_log_ = std::numeric_limits<double>::infinity();
    }
    converged_ = small_run_ >= 3 && log_ratio < 0.0 && tail_log_ < log_tol + log_sum;
    return converged_;
  }

  /// log of the partial sum; -inf for an empty or all-zero series.
  double log_sum() const noexcept {
    return mantissa_ > 0.0 ? scale_ + std::log(mantissa_) : -std::numeric_limits<double>::infinity();
  }
  int terms() const noexcept { return terms_; }
  bool converged() const noexcept { return converged_; }
  double log_tail_bound() const noexcept { return tail_log_; }

 private:
  double tol_;
  double scale_ = 0.0;
  double mantissa_ = 0.0;
  double prev_log_ = -std::numeric_limits<double>::infinity();
  double tail_log_ = std::numeric_limits<double>::infinity();
  int terms_ = 0;
  int small_run_ = 0;
  bool converged_ = false;
};

}  // namespace msf::special
