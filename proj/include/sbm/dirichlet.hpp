#pragma once

#include <cstddef>
#include <vector>

#include "sbm/domain.hpp"
#include "sbm/levy.hpp"

namespace sbm {

/// Scalar Monte Carlo estimate.
struct Estimate {
  double value = 0.0;
  double std_err = 0.0;
  std::size_t n = 0;
  /// Mean before clipping at 0 (killed-kernel estimators only).
  double raw = 0.0;
};

/// One path of X observed at t_k = k t / m, killed at the first observation outside D.
struct KilledOutcome {
  bool survived = true;
  /// Grid index k (1..m) of the first observation outside D; m + 1 if survived.
  std::size_t exit_index = 0;
  double exit_time = 0.0;
  /// Subordinator at the exit observation and at the horizon.
  double s_exit = 0.0;
  double s_end = 0.0;
  /// X_t if survived, X at the exit observation otherwise.
  Point position;
};

struct KillingOptions {
  /// Kill between observations with the Brownian-bridge crossing probability
  /// of the locally flat boundary, exp(-delta_0 delta_1 / Delta S).
  bool bridge = false;
};

KilledOutcome simulate_killed(const SubordinatorSampler& sampler, const Domain& domain, const Point& x, double t,
                              std::size_t m, Philox& rng, const KillingOptions& opts = {});
KilledOutcome simulate_killed(const SubordinatorSampler& sampler, const Domain& domain, const Point& x, double t,
                              std::size_t m, std::uint64_t substream = 0, const KillingOptions& opts = {});

/// Path observed at the increasing `times`; exit_index counts from 1 and is
/// times.size() + 1 on survival. When `s_path` is given the subordinator is
/// followed to the last time even after the exit and stored there.
KilledOutcome walk_killed(const SubordinatorSampler& sampler, const Domain& domain, const Point& x,
                          const std::vector<double>& times, Philox& rng, const KillingOptions& opts,
                          std::vector<double>* s_path = nullptr);

/// Fraction of n paths with tau_D > t.
Estimate survival_prob(const SubordinatorSampler& sampler, const Domain& domain, const Point& x, double t,
                       std::size_t n, std::size_t m, unsigned workers = 1, const KillingOptions& opts = {});

/// p_D(t, x, y) for several y from one set of paths, by the subtraction identity
///   p_D = E[ g(S_t, |x-y|) - 1{tau <= t} g(S_t - S_tau, |X_tau - y|) ],
/// g the Gaussian kernel of Delta; estimates are clipped at 0.
std::vector<Estimate> killed_kernel_mc(const SubordinatorSampler& sampler, const Domain& domain, const Point& x,
                                       const std::vector<Point>& ys, double t, std::size_t n, std::size_t m,
                                       unsigned workers = 1, const KillingOptions& opts = {});
Estimate killed_kernel_mc(const SubordinatorSampler& sampler, const Domain& domain, const Point& x, const Point& y,
                          double t, std::size_t n, std::size_t m, unsigned workers = 1,
                          const KillingOptions& opts = {});

/// Dirichlet heat kernel of Brownian motion (generator Delta) in the half-space at internal time s.
double half_space_gaussian_kernel(const Domain& domain, double s, const Point& x, const Point& y);

/// q_D(t, x, y) = E[half_space_gaussian_kernel(S_t, x, y)] for the half-space: double
/// quadrature over Kanter's representation for stable models, a sample mean
/// over n draws of S_t otherwise (std_err = 0 for the quadrature).
Estimate skbm_lower_quadrature(const SubordinatorSampler& sampler, const Domain& domain, double t, const Point& x,
                               const Point& y, std::size_t n = 100000, unsigned workers = 1);

struct DecayFit {
  double rate = 0.0;
  /// Standard error of the least-squares slope.
  double std_err = 0.0;
  double intercept = 0.0;
};

/// Least-squares slope of -log y(t) against t.
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& y, const std::vector<double>& y_err);

/// Principal eigenvalue of the killed generator from the decay of P_x(tau_D > t) over
/// t_grid; all times are observed on one path with uniform step max(t_grid)/m.
DecayFit estimate_lambda_D(const SubordinatorSampler& sampler, const Domain& domain, const Point& x,
                           const std::vector<double>& t_grid, std::size_t n, std::size_t m, unsigned workers = 1);

}  // namespace sbm
