#include "sbm/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sbm/errors.hpp"
#include "sbm/free_kernel.hpp"
#include "sbm/quadrature.hpp"

namespace sbm {
namespace {

double Phi_or_inf(const SubordinatorModel& model, double delta) {
  return std::isinf(delta) ? std::numeric_limits<double>::infinity() : eval_Phi(model, delta);
}

// dPhi/ds
double Phi_prime(const SubordinatorModel& model, double s) {
  const double l = 1.0 / (s * s);
  const double p = model.phi(l);
  return model.phi_prime(l) * 2.0 * l / s / (p * p);
}

QuadratureOptions tol8() {
  QuadratureOptions o;
  o.abs_tol = 0.0;
  o.rel_tol = 1e-8;
  o.piece_width = 0.5;
  return o;
}

void require_in(const Domain& domain, const Point& x, const char* what) {
  if (x.size() != domain.dim() || !domain.contains(x)) throw DomainError(std::string(what) + " must lie in D");
}

}  // namespace

double boundary_factor(const SubordinatorModel& model, double t, double delta) {
  if (!(t > 0.0)) throw DomainError("boundary_factor requires t > 0");
  if (!(delta >= 0.0)) throw DomainError("boundary_factor requires delta >= 0");
  if (delta == 0.0) return 0.0;
  if (std::isinf(delta)) return 1.0;
  return std::min(1.0, std::sqrt(eval_Phi(model, delta) / t));
}

EnvelopeValues dirichlet_envelope(const SubordinatorModel& model, const Domain& domain, double t, const Point& x,
                                  const Point& y, double a_L, double a_U) {
  if (x.size() != domain.dim() || y.size() != domain.dim()) throw DomainError("points have the wrong dimension");
  const double dx = domain.delta(x), dy = domain.delta(y);
  if (!domain.in_closure(x) || !domain.in_closure(y)) throw DomainError("x and y must lie in D");
  if (dx == 0.0 || dy == 0.0) return {0.0, 0.0};
  const int d = domain.dim();
  const double r = (x - y).norm();
  const double f = boundary_factor(model, t, dx) * boundary_factor(model, t, dy);
  return {f * free_envelope(model, t, r, d, a_L), f * free_envelope(model, t, r, d, a_U)};
}

double EnvelopePair::lower(double t, const Point& x, const Point& y) const {
  return dirichlet_envelope(model, domain, t, x, y, a_L, a_U).lower;
}

double EnvelopePair::upper(double t, const Point& x, const Point& y) const {
  return dirichlet_envelope(model, domain, t, x, y, a_L, a_U).upper;
}

double a_xy(const SubordinatorModel& model, const Domain& domain, const Point& x, const Point& y) {
  require_in(domain, x, "x");
  require_in(domain, y, "y");
  return std::sqrt(Phi_or_inf(model, domain.delta(x)) * Phi_or_inf(model, domain.delta(y)));
}

double h_comparison(const SubordinatorModel& model, double b, double r, int d) {
  if (!(b > 0.0) || !(r > 0.0)) throw DomainError("h_comparison requires b, r > 0");
  if (d < 1) throw DomainError("dimension must be >= 1");
  const double rb = invert_Phi(model, b);
  double tail = 0.0;
  if (rb > r) {
    auto f = [&](double s) { return eval_Phi(model, s) / std::pow(s, d + 1); };
    tail = integrate_log(f, r, rb, tol8()).value;
  }
  return std::min(b / std::pow(r, d), b / std::pow(rb, d) + std::max(tail, 0.0));
}

double green_envelope(const SubordinatorModel& model, const Domain& domain, const Point& x, const Point& y) {
  require_in(domain, x, "x");
  require_in(domain, y, "y");
  const double r = (x - y).norm();
  if (!(r > 0.0)) throw DomainError("the Green function is singular at x = y");
  const int d = domain.dim();
  if (d > 2) {
    const double pr = eval_Phi(model, r);
    const double fx = std::min(1.0, Phi_or_inf(model, domain.delta(x)) / pr);
    const double fy = std::min(1.0, Phi_or_inf(model, domain.delta(y)) / pr);
    return pr / std::pow(r, d) * std::sqrt(fx * fy);
  }
  return h_comparison(model, a_xy(model, domain, x, y), r, d);
}

double green_upper_disconnected(const SubordinatorModel& model, const Domain& domain, const Point& x,
                                const Point& y) {
  const double r = (x - y).norm();
  if (!(r > 0.0)) throw DomainError("the Green function is singular at x = y");
  return a_xy(model, domain, x, y) / std::pow(r, domain.dim());
}

double h_Td(const SubordinatorModel& model, double b, double r, double T, int d) {
  if (d != 1 && d != 2) throw DomainError("h_Td is defined for d = 1, 2");
  if (!(T > 0.0) || !(b > 0.0) || !(b <= T / 2 * (1 + 1e-12))) throw DomainError("h_Td requires 0 < b <= T/2");
  if (!(r > 0.0) || !(r <= invert_Phi(model, T / 2) * (1 + 1e-12))) throw DomainError("h_Td requires 0 < r <= Phi^-1(T/2)");
  // s = Phi^{-1}(Phi(r)/u) turns the middle term into
  // int_r^{Phi^{-1}(T)} (1 min b/Phi(s)) Phi'(s) s^{-d} ds.
  const double top = invert_Phi(model, T);
  auto f = [&](double s) { return std::min(1.0, b / eval_Phi(model, s)) * Phi_prime(model, s) / std::pow(s, d); };
  const double sb = invert_Phi(model, b);
  double middle = 0.0;
  if (sb > r && sb < top) {
    middle = integrate_log(f, r, sb, tol8()).value + integrate_log(f, sb, top, tol8()).value;
  } else {
    middle = integrate_log(f, r, top, tol8()).value;
  }
  const double pr = eval_Phi(model, r);
  return b + middle + pr / std::pow(r, d) * std::min(1.0, b / pr);
}

double log_plus(double z) { return std::log(std::max(z, 1.0)); }

EnvelopeValues example8_envelopes(double t, const Point& x, const Point& y, double delta_x, double delta_y,
                                  double a_L, double a_U) {
  if (!(t > 0.0 && t < 0.5)) throw DomainError("example envelopes require 0 < t < 1/2");
  if (!(delta_x >= 0.0 && delta_x < 0.5 && delta_y >= 0.0 && delta_y < 0.5))
    throw DomainError("example envelopes require boundary distances in [0, 1/2)");
  if (x.size() != y.size()) throw DomainError("points have different dimensions");
  const double r = (x - y).norm();
  if (!(r < 0.5)) throw DomainError("example envelopes require |x-y| < 1/2");
  const int d = static_cast<int>(x.size());
  auto factor = [&](double delta) {
    if (delta == 0.0) return 0.0;
    return std::min(1.0, delta / std::sqrt(t) * std::sqrt(std::log(1.0 / delta)));
  };
  const double f = factor(delta_x) * factor(delta_y);
  if (f == 0.0) return {0.0, 0.0};
  const double lt = std::log(1.0 / t);
  const double on = std::pow(t, -0.5 * d) * std::pow(lt, 0.5 * d);
  if (r == 0.0) return {f * on, f * on};
  const double jump = t / (std::pow(std::log(1.0 / r), 2) * std::pow(r, d + 2));
  auto core = [&](double a) {
    return std::min(on, jump + std::pow(t, -0.5 * d) * std::pow(lt, -0.5 * d) * std::exp(-a * r * r / t * lt));
  };
  return {f * core(a_L), f * core(a_U)};
}

double example8_green_d2(const Point& x, const Point& y, double delta_x, double delta_y) {
  if (!(delta_x > 0.0 && delta_x < 0.5 && delta_y > 0.0 && delta_y < 0.5))
    throw DomainError("example Green estimate requires boundary distances in (0, 1/2)");
  const double r = (x - y).norm();
  if (!(r > 0.0)) throw DomainError("the Green function is singular at x = y");
  const double b = delta_x * delta_y * std::sqrt(std::log(1.0 / delta_x) * std::log(1.0 / delta_y));
  const double lb = std::log(1.0 / b);
  const double r2 = r * r;
  return std::min(b / r2, log_plus(b / (r2 * lb)) * log_plus(lb / (r2 * b)) + lb);
}

double pv_identity_check(const std::function<double(double)>& k, double R, double s,
                         const std::vector<double>& breakpoints) {
  if (!(R > 0.0 && s > 0.0 && s < R / 2)) throw DomainError("pv_identity_check requires 0 < s < R/2");
  QuadratureOptions opts;
  opts.abs_tol = 1e-14;
  opts.rel_tol = 1e-12;

  // cut points in u, shared by both sides
  std::vector<double> cuts{s, R};
  for (double b : breakpoints)
    if (b > 0.0 && b < R) cuts.push_back(b);

  auto weight = [s](double u) { return u < s ? 2 * u * u : u * u + s * (2 * u - s); };
  auto rhs_f = [&](double u) { return weight(u) * k(u); };
  auto integrate_cut = [&](const Integrand& f, double lo, double hi, std::vector<double> at) {
    at.push_back(lo);
    at.push_back(hi);
    std::sort(at.begin(), at.end());
    at.erase(std::remove_if(at.begin(), at.end(), [&](double c) { return c < lo || c > hi; }), at.end());
    at.erase(std::unique(at.begin(), at.end()), at.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < at.size(); ++i) {
      const double a = at[i], b = at[i + 1];
      // geometric refinement towards the left end, where k may be singular
      if (a == lo && lo < 1e-3 * (b - a) && lo > 0.0) {
        double left = a;
        for (double right = 2 * a; left < b; right = std::min(b, 2 * right)) {
          total += integrate(f, left, right, opts).value;
          left = right;
        }
      } else {
        total += integrate(f, a, b, opts).value;
      }
    }
    return total;
  };

  // The two-sided integral at eps differs from its limit by int_0^eps 2u^2 k(u) du,
  // far below quadrature noise at eps = 1e-7 s for locally integrable k.
  const double eps = 1e-7 * s;
  auto lhs_f = [&](double t) {
    const double tp = std::max(t, 0.0);
    return (tp * tp - s * s) * k(std::abs(t - s));
  };
  // t = s + u on the right, t = s - u on the left; t = 0 sits at u = s
  auto right_u = [&](double u) { return lhs_f(s + u); };
  auto left_u = [&](double u) { return lhs_f(s - u); };
  const double lhs = integrate_cut(right_u, eps, R, cuts) + integrate_cut(left_u, eps, R, cuts);
  const double rhs = integrate_cut(rhs_f, 0.0, R, cuts);
  return std::abs(lhs - rhs) / std::abs(rhs);
}

}  // namespace sbm
