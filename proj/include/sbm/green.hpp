#pragma once

#include <cstddef>
#include <vector>

#include "sbm/dirichlet.hpp"

namespace sbm {

struct GreenOptions {
  /// Geometric points filling (0, t_max/m] before the uniform grid.
  std::size_t geometric_points = 40;
  double geometric_span = 1e-5;
  /// Tail fit uses uniform grid times in [tail_window * t_max, t_max].
  double tail_window = 0.5;
  /// Fraction of the total above which the tail is flagged.
  double tail_flag = 0.1;
  KillingOptions killing;
};

struct GreenEstimate {
  double value = 0.0;
  double std_err = 0.0;
  std::size_t n = 0;
  /// Exponential-tail part int_{t_max}^inf, already included in value.
  double tail = 0.0;
  bool tail_flagged = false;
  /// Decay rate used for the tail.
  DecayFit lambda;
};

/// G_D(x, y) = int_0^inf p_D(t, x, y) dt: per path, the subtraction-identity
/// integrand on a geometric-then-uniform grid up to t_max, integrated by the
/// trapezoid rule, plus p_D(t_max)/lambda_D with lambda_D fitted to the
/// survival of the same paths.
GreenEstimate green_mc(const SubordinatorSampler& sampler, const Domain& domain, const Point& x, const Point& y,
                       double t_max, std::size_t n, std::size_t m, unsigned workers = 1,
                       const GreenOptions& opts = {});

/// Time grid used by green_mc.
std::vector<double> green_time_grid(double t_max, std::size_t m, const GreenOptions& opts = {});

}  // namespace sbm
