#include "sbm/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "sbm/errors.hpp"

namespace sbm {
namespace {

double nearest_rank(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
  return v[std::clamp<std::size_t>(rank, 1, v.size()) - 1];
}

}  // namespace

FittedConstants fit_constants(const std::vector<RatioPoint>& points) {
  if (points.size() < 10) throw ConfigError("fit_constants needs at least 10 grid points");
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> lo, up;
  for (const auto& p : points) {
    lo.push_back(p.lower > 0.0 ? p.estimate / p.lower : inf);
    up.push_back(p.upper > 0.0 ? p.estimate / p.upper : (p.estimate > 0.0 ? inf : 0.0));
  }
  FittedConstants c;
  c.c_lower = std::min(1.0, nearest_rank(lo, 0.01));
  c.c_upper = std::max(1.0, nearest_rank(up, 0.99));
  return c;
}

RatioReport make_ratio_report(std::vector<RatioPoint> points, double band, double slack) {
  RatioReport rep;
  rep.constants = fit_constants(points);
  for (const auto& p : points) {
    const double tol = slack * p.std_err;
    if (rep.constants.c_lower * p.lower > p.estimate + tol || p.estimate - tol > rep.constants.c_upper * p.upper)
      ++rep.violations;
  }
  rep.points = std::move(points);
  rep.in_band = rep.constants.c() <= band;
  rep.pass = rep.in_band && rep.violations == 0;
  return rep;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace sbm
