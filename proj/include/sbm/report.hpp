#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace sbm {

/// One grid point of a two-sided envelope comparison.
struct RatioPoint {
  double lower = 0.0;
  double estimate = 0.0;
  double std_err = 0.0;
  double upper = 0.0;
};

struct FittedConstants {
  /// 1st percentile of estimate/lower, clamped above by 1.
  double c_lower = 1.0;
  /// 99th percentile of estimate/upper, clamped below by 1.
  double c_upper = 1.0;
  /// max(c_upper, 1/c_lower): the single comparability constant.
  double c() const { return c_lower > 0.0 ? std::max(c_upper, 1.0 / c_lower) : INFINITY; }
};

/// Nearest-rank quantiles; throws ConfigError for fewer than 10 points.
FittedConstants fit_constants(const std::vector<RatioPoint>& points);

struct RatioReport {
  std::vector<RatioPoint> points;
  FittedConstants constants;
  /// Points violating c_lower lower <= estimate <= c_upper upper by more than slack*stderr.
  std::size_t violations = 0;
  bool in_band = false;
  bool pass = false;
};

/// Fits the constants and checks every point with `slack` standard errors
/// and c() <= band.
RatioReport make_ratio_report(std::vector<RatioPoint> points, double band = 50.0, double slack = 3.0);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace sbm
