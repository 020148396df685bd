#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "msf/units.hpp"

namespace msf::harness {

struct CheckContext {
  Units units;
  std::uint64_t seed = 20240611;
};

/// Outcome of one acceptance criterion or invariant check.
struct CheckResult {
  std::string id;
  std::string title;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string comparison;  // how measured relates to threshold when passing, e.g. "<=" or ">"
  nlohmann::json details = nlohmann::json::object();
};

inline constexpr int kCriterionCount = 12;

/// Acceptance criterion n in 1..kCriterionCount.
CheckResult run_criterion(int n, const CheckContext& ctx);
std::vector<CheckResult> run_criteria(const CheckContext& ctx);

/// Module invariants not already covered by a criterion.
std::vector<CheckResult> run_invariants(const CheckContext& ctx);

/// Least-squares circle through points; residual is the largest distance from the circle.
struct CircleFit {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
  double residual = 0.0;
};
CircleFit fit_circle(const std::vector<double>& x, const std::vector<double>& y);

/// Slope of the unwrapped polar angle of (x - cx, y - cy) against t.
double angular_frequency(const std::vector<double>& t, const std::vector<double>& x, const std::vector<double>& y,
                         double cx, double cy);

nlohmann::json to_json(const CheckResult& r);
/// One fixed-width line: "[PASS] id  title  measured=... threshold=...".
std::string summary_line(const CheckResult& r);

}  // namespace msf::harness
