#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "sbm/bernstein.hpp"
#include "sbm/rng.hpp"

namespace sbm {

/// Isotropic jump density j(r) of the subordinate Brownian motion in R^d:
///   j(r) = int_0^inf (4 pi s)^{-d/2} exp(-r^2/(4s)) mu(s) ds.
/// Stable models integrate against the closed-form mu; the log examples swap
/// the order with mu's Stieltjes representation and integrate the Laplace
/// transform of the heat kernel (a Bessel-K resolvent) against m(s).
double levy_density_j(const SubordinatorModel& model, double r, int d);

/// j(r) by direct quadrature against mu(s), whatever the model. Slow for the
/// log examples (mu itself is a quadrature); kept as the independent route.
double levy_density_j_direct(const SubordinatorModel& model, double r, int d);

/// max over the grid of j(r)/j(r+1); grid points must exceed 1.
double check_jdouble(const SubordinatorModel& model, int d, const std::vector<double>& r_grid);

/// max over the grid of j(r) r^d / phi(r^-2).
double jupper_constant(const SubordinatorModel& model, int d, const std::vector<double>& r_grid);

enum class SamplingScheme { exact_stable, cpp_truncation };

struct JumpTable;

/// Draws subordinator increments S_t. A value type: copies share the
/// immutable jump table, and every random draw is keyed by
/// (seed, stream_id, substream) through the counter-based generator.
class SubordinatorSampler {
 public:
  SubordinatorSampler(SubordinatorModel model, SamplingScheme scheme, double epsilon = 1e-4,
                      std::uint64_t seed = 1, std::uint32_t stream_id = 0);

  /// exact_stable for stable models, cpp_truncation otherwise.
  static SubordinatorSampler make_default(const SubordinatorModel& model, std::uint64_t seed = 1,
                                          double epsilon = 1e-4);

  const SubordinatorModel& model() const { return model_; }
  SamplingScheme scheme() const { return scheme_; }
  double epsilon() const { return epsilon_; }
  std::uint64_t seed() const { return seed_; }
  std::uint32_t stream_id() const { return stream_id_; }

  SubordinatorSampler with_seed(std::uint64_t seed) const;
  SubordinatorSampler with_stream(std::uint32_t stream_id) const;

  /// Generator for one independent substream (path index, sample index, ...).
  Philox rng(std::uint64_t substream) const { return Philox(seed_, stream_id_, substream); }

  /// One draw of S_t.
  double draw(double t, Philox& rng) const;

  /// Rate nu(epsilon) = mu([epsilon, inf)) of the retained jumps.
  double jump_rate() const;
  /// m(epsilon) = int_0^epsilon t mu(t) dt, paid as deterministic drift.
  double compensation_drift() const;
  /// Laplace exponent of the law actually sampled (equals phi for exact_stable).
  double sampled_laplace_exponent(double lambda) const;

 private:
  double draw_jump(Philox& rng) const;

  SubordinatorModel model_;
  SamplingScheme scheme_;
  double epsilon_;
  std::uint64_t seed_;
  std::uint32_t stream_id_;
  std::shared_ptr<const JumpTable> table_;
};

/// One-sided stable variable with E exp(-l S) = exp(-l^b), b in (0,1), by
/// Kanter's representation.
double sample_one_sided_stable(double b, Philox& rng);

/// Kanter's function A(u), u in (0,1): S = (A(U)/E)^{(1-b)/b}.
double kanter_A(double b, double u);

/// n i.i.d. draws of S_t; draw i uses substream i.
std::vector<double> sample_S(const SubordinatorSampler& sampler, double t, std::size_t n,
                             unsigned workers = 1);

/// Subordinator values at an increasing time grid (first point > 0), built
/// from independent increments S_{t_k} - S_{t_{k-1}}.
std::vector<double> sample_path_increments(const SubordinatorSampler& sampler,
                                           const std::vector<double>& t_grid, Philox& rng);
std::vector<double> sample_path_increments(const SubordinatorSampler& sampler,
                                           const std::vector<double>& t_grid,
                                           std::uint64_t substream = 0);

/// Empirical P(1/(2 phi^-1(1/t)) <= S_t <= 1/phi^-1(rho/t)).
double concentration_probability(const SubordinatorSampler& sampler, double t, double rho,
                                 std::size_t n, unsigned workers = 1);

}  // namespace sbm
