#include "sbm/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "sbm/errors.hpp"

namespace sbm {
namespace {

struct Segment {
  double a;
  double b;
  double value;
  double error;
  unsigned depth;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk_rule(const Integrand& f, double a, double b, unsigned depth) {
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
      f, a, b, 0, 0.0, &error);
  // Boost leaves the non-adaptive error estimate on the reference interval [-1, 1].
  return {a, b, value, error * 0.5 * (b - a), depth};
}

void require_converged(const QuadratureResult& r, double a, double b, const QuadratureOptions& opts) {
  if (!std::isfinite(r.value)) {
    std::ostringstream os;
    os << "quadrature produced a non-finite value on [" << a << ", " << b << "]";
    throw NumericError(os.str());
  }
  const double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(r.value));
  if (r.error > 10.0 * target) {
    std::ostringstream os;
    os << "quadrature did not converge on [" << a << ", " << b << "]: value=" << r.value
       << " error=" << r.error << " target=" << target;
    throw NumericError(os.str());
  }
}

// Globally adaptive: always bisect the segment with the largest error until
// the summed error meets max(abs_tol, rel_tol*|sum|).
QuadratureResult adapt(const Integrand& f, double a, double b, int pieces, const QuadratureOptions& opts) {
  std::priority_queue<Segment> queue;
  const double width = (b - a) / pieces;
  double value = 0.0, error = 0.0;
  for (int k = 0; k < pieces; ++k) {
    const double lo = a + k * width;
    const double hi = (k + 1 == pieces) ? b : lo + width;
    Segment s = gk_rule(f, lo, hi, 0);
    value += s.value;
    error += s.error;
    queue.push(s);
  }
  const std::size_t max_segments = static_cast<std::size_t>(pieces) + (std::size_t{1} << std::min(opts.max_depth, 20u));
  std::vector<Segment> settled;
  while (!queue.empty() && queue.size() + settled.size() < max_segments) {
    if (error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) break;
    Segment s = queue.top();
    queue.pop();
    const double mid = 0.5 * (s.a + s.b);
    if (s.depth >= 2 * opts.max_depth + 10 || !(mid > s.a && mid < s.b)) {
      settled.push_back(s);
      continue;
    }
    Segment l = gk_rule(f, s.a, mid, s.depth + 1);
    Segment r = gk_rule(f, mid, s.b, s.depth + 1);
    value += l.value + r.value - s.value;
    error += l.error + r.error - s.error;
    queue.push(l);
    queue.push(r);
  }
  // Re-sum to drop the rounding accumulated by the running updates.
  QuadratureResult total;
  for (const auto& s : settled) {
    total.value += s.value;
    total.error += s.error;
  }
  while (!queue.empty()) {
    total.value += queue.top().value;
    total.error += queue.top().error;
    queue.pop();
  }
  return total;
}

}  // namespace

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureOptions& opts) {
  if (a == b) return {};
  QuadratureResult r;
  if (std::isinf(b) && b > 0 && std::isfinite(a)) {
    // x = a + t/(1-t)
    auto g = [&f, a](double t) {
      if (t >= 1.0) return 0.0;
      const double u = 1.0 - t;
      const double v = f(a + t / u) / (u * u);
      return std::isfinite(v) ? v : 0.0;
    };
    r = adapt(g, 0.0, 1.0, 1, opts);
  } else if (std::isfinite(a) && std::isfinite(b) && b > a) {
    r = adapt(f, a, b, 1, opts);
  } else {
    throw DomainError("integrate requires finite a < b or b = +inf");
  }
  require_converged(r, a, b, opts);
  return r;
}

QuadratureResult integrate_pieces(const Integrand& f, double a, double b, const QuadratureOptions& opts) {
  if (a == b) return {};
  if (!(b > a) || !std::isfinite(a) || !std::isfinite(b))
    throw DomainError("integrate_pieces requires a finite interval a < b");
  const auto pieces = std::max(1, static_cast<int>(std::ceil((b - a) / opts.piece_width)));
  const QuadratureResult total = adapt(f, a, b, pieces, opts);
  require_converged(total, a, b, opts);
  return total;
}

QuadratureResult integrate_log(const Integrand& f, double a, double b, const QuadratureOptions& opts) {
  if (a == b) return {};
  if (!(a > 0.0) || !(b > a) || !std::isfinite(b)) throw DomainError("integrate_log requires 0 < a < b < inf");
  auto g = [&f](double u) {
    const double s = std::exp(u);
    return f(s) * s;
  };
  return integrate_pieces(g, std::log(a), std::log(b), opts);
}

}  // namespace sbm
