#include "sbm/free_kernel.hpp"

#include <cmath>
#include <numbers>

#include "sbm/errors.hpp"
#include "sbm/parallel.hpp"

namespace sbm {
namespace {

constexpr double kPi = std::numbers::pi;

double sphere_area(int d) {
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

double on_diagonal(const SubordinatorModel& model, double t, int d) {
  return std::pow(invert_phi(model, 1.0 / t), 0.5 * d);
}

}  // namespace

double gaussian_kernel(double s, double r, int d) {
  if (!(s > 0.0)) return 0.0;
  return std::pow(4.0 * kPi * s, -0.5 * d) * std::exp(-r * r / (4.0 * s));
}

DensityEstimate free_kernel_mc(const SubordinatorSampler& sampler, double t, const std::vector<double>& r_list, int d,
                               std::size_t n, unsigned workers, DensityMethod method, double bandwidth) {
  if (!(t > 0.0)) throw DomainError("free_kernel_mc requires t > 0");
  if (n == 0) throw DomainError("free_kernel_mc requires n >= 1");
  if (d < 1) throw DomainError("dimension must be >= 1");
  if (method == DensityMethod::histogram && !(bandwidth > 0.0)) throw DomainError("histogram bandwidth must be positive");
  const std::size_t k = r_list.size();
  for (double r : r_list)
    if (!(r >= 0.0)) throw DomainError("query radii must be nonnegative");

  // shell volumes for the histogram estimator
  std::vector<double> shell(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double lo = std::max(0.0, r_list[j] - bandwidth), hi = r_list[j] + bandwidth;
    shell[j] = sphere_area(d) / d * (std::pow(hi, d) - std::pow(lo, d));
  }

  auto chunks = run_chunks(n, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<RunningStats> stats(k);
    for (std::size_t i = begin; i < end; ++i) {
      Philox rng = sampler.rng(i);
      const double s = sampler.draw(t, rng);
      if (method == DensityMethod::conditional_gaussian) {
        for (std::size_t j = 0; j < k; ++j) stats[j].add(gaussian_kernel(s, r_list[j], d));
      } else {
        double norm2 = 0.0;
        for (int c = 0; c < d; ++c) {
          const double z = std::sqrt(2.0 * s) * standard_normal(rng);
          norm2 += z * z;
        }
        const double radius = std::sqrt(norm2);
        for (std::size_t j = 0; j < k; ++j)
          stats[j].add(std::abs(radius - r_list[j]) <= bandwidth ? 1.0 / shell[j] : 0.0);
      }
    }
    return stats;
  });

  DensityEstimate est;
  est.t = t;
  est.r = r_list;
  est.n = n;
  est.method = method;
  est.values.resize(k);
  est.std_err.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    RunningStats total;
    for (const auto& c : chunks) total.merge(c[j]);
    est.values[j] = total.mean;
    est.std_err[j] = total.stderr_of_mean();
  }
  return est;
}

double free_envelope(const SubordinatorModel& model, double t, double r, int d, double a) {
  if (!(t > 0.0)) throw DomainError("envelope requires t > 0");
  if (!(r >= 0.0)) throw DomainError("envelope requires r >= 0");
  if (!(a > 0.0)) throw DomainError("decay constant must be positive");
  const double lam = invert_phi(model, 1.0 / t);
  const double on = std::pow(lam, 0.5 * d);
  if (r == 0.0) return on;
  const double off = t * eval_H(model, 1.0 / (r * r)) / std::pow(r, d) + on * std::exp(-a * r * r * lam);
  return std::min(on, off);
}

double free_envelope_upper(const SubordinatorModel& model, double t, double r, int d, double a_U) {
  return free_envelope(model, t, r, d, a_U);
}

double free_envelope_lower(const SubordinatorModel& model, double t, double r, int d, double a_L) {
  return free_envelope(model, t, r, d, a_L);
}

double uppcom_check(const SubordinatorModel& model, double t, double r, int d, double b) {
  if (!(r > 0.0)) throw DomainError("uppcom_check requires r > 0");
  const double ref = std::min(on_diagonal(model, t, d), t * eval_phi(model, 1.0 / (r * r)) / std::pow(r, d));
  return free_envelope_upper(model, t, r, d, b) / ref;
}

}  // namespace sbm
