#pragma once

#include <cstddef>
#include <vector>

#include "sbm/bernstein.hpp"
#include "sbm/levy.hpp"

namespace sbm {

enum class DensityMethod { conditional_gaussian, histogram };

/// Monte Carlo estimate of p(t, r) at query radii.
struct DensityEstimate {
  double t = 0.0;
  std::vector<double> r;
  std::vector<double> values;
  std::vector<double> std_err;
  std::size_t n = 0;
  DensityMethod method = DensityMethod::conditional_gaussian;
};

/// Heat kernel of the generator Delta at internal time s: (4 pi s)^{-d/2} exp(-r^2/(4s)).
double gaussian_kernel(double s, double r, int d);

/// p(t, r) estimated from n draws of S_t. conditional_gaussian averages
/// gaussian_kernel(S_i, r); histogram counts |X_t| in the shell [r-h, r+h].
DensityEstimate free_kernel_mc(const SubordinatorSampler& sampler, double t, const std::vector<double>& r_list, int d,
                               std::size_t n, unsigned workers = 1,
                               DensityMethod method = DensityMethod::conditional_gaussian, double bandwidth = 0.05);

/// phi^{-1}(1/t)^{d/2} min (t H(r^-2)/r^d + phi^{-1}(1/t)^{d/2} exp(-a r^2 phi^{-1}(1/t))).
double free_envelope(const SubordinatorModel& model, double t, double r, int d, double a);
double free_envelope_upper(const SubordinatorModel& model, double t, double r, int d, double a_U = 0.5);
double free_envelope_lower(const SubordinatorModel& model, double t, double r, int d, double a_L = 0.5);

/// free_envelope_upper(b) / (phi^{-1}(1/t)^{d/2} min t r^-d phi(r^-2)).
double uppcom_check(const SubordinatorModel& model, double t, double r, int d, double b = 0.5);

}  // namespace sbm
