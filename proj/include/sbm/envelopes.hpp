#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "sbm/bernstein.hpp"
#include "sbm/domain.hpp"

namespace sbm {

/// 1 min sqrt(Phi(delta)/t); 0 at delta = 0, 1 at delta = inf.
double boundary_factor(const SubordinatorModel& model, double t, double delta);

struct EnvelopeValues {
  double lower = 0.0;
  double upper = 0.0;
};

/// Factorized Dirichlet heat-kernel envelope
///   f(x) f(y) [phi^{-1}(1/t)^{d/2} min (t H(r^-2)/r^d + phi^{-1}(1/t)^{d/2} e^{-a r^2 phi^{-1}(1/t)})]
/// with a = a_L for the lower and a = a_U for the upper bound.
EnvelopeValues dirichlet_envelope(const SubordinatorModel& model, const Domain& domain, double t, const Point& x,
                                  const Point& y, double a_L = 0.5, double a_U = 0.5);

/// Envelope functions of one model and domain with their decay constants and
/// a slot for the fitted comparability constant.
struct EnvelopePair {
  SubordinatorModel model;
  Domain domain;
  double a_L = 0.5;
  double a_U = 0.5;
  double fitted_c = 1.0;

  double lower(double t, const Point& x, const Point& y) const;
  double upper(double t, const Point& x, const Point& y) const;
};

/// sqrt(Phi(delta_D(x)) Phi(delta_D(y))).
double a_xy(const SubordinatorModel& model, const Domain& domain, const Point& x, const Point& y);

/// b/r^d min (b/Phi^{-1}(b)^d + (int_r^{Phi^{-1}(b)} Phi(s)/s^{d+1} ds)_+).
double h_comparison(const SubordinatorModel& model, double b, double r, int d);

/// g(x, y): Phi(r)/r^d sqrt(1 min Phi(dx)/Phi(r)) sqrt(1 min Phi(dy)/Phi(r)) for d > 2,
/// h_comparison(a(x, y), r) for d <= 2.
double green_envelope(const SubordinatorModel& model, const Domain& domain, const Point& x, const Point& y);

/// a(x, y)/|x-y|^d, the upper bound that needs no connectedness.
double green_upper_disconnected(const SubordinatorModel& model, const Domain& domain, const Point& x,
                                const Point& y);

/// h_{T,d}(b, r) = b + Phi(r) int_{Phi(r)/T}^1 (1 min ub/Phi(r)) u^-2 Phi^{-1}(Phi(r)/u)^{-d} du
///                   + Phi(r)/r^d (1 min b/Phi(r)),
/// for 0 < r <= Phi^{-1}(T/2), 0 < b <= T/2, d in {1, 2}.
double h_Td(const SubordinatorModel& model, double b, double r, double T, int d);

/// Log-corrected envelopes for the logarithmic examples (0 < t < 1/2,
/// deltas and |x-y| below 1/2); boundary factors 1 min (delta/sqrt t) sqrt(log 1/delta).
EnvelopeValues example8_envelopes(double t, const Point& x, const Point& y, double delta_x, double delta_y,
                                  double a_L = 0.5, double a_U = 0.5);

/// Explicit d = 2 Green-function estimate for the logarithmic examples with
/// b = dx dy sqrt(log(1/dx) log(1/dy)).
double example8_green_d2(const Point& x, const Point& y, double delta_x, double delta_y);

/// log(max(z, 1))
double log_plus(double z);

/// Relative discrepancy between the principal-value integral
///   lim_{eps->0} (int_{s+eps}^{R+s} + int_{-R+s}^{s-eps}) ((t_+)^2 - s^2) k(|t-s|) dt
/// and int_0^R (1{u<s} 2u^2 + 1{u>=s}(u^2 + s(2u-s))) k(u) du, 0 < s < R/2.
/// Kinks or jumps of k may be listed in `breakpoints` (u-values).
double pv_identity_check(const std::function<double(double)>& k, double R, double s,
                         const std::vector<double>& breakpoints = {});

}  // namespace sbm
