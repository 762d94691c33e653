#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "sbm/errors.hpp"
#include "sbm/free_kernel.hpp"

using namespace sbm;

namespace {

constexpr double kPi = std::numbers::pi;

double cauchy(double t, double r) { return t / (kPi * (t * t + r * r)); }

SubordinatorSampler cauchy_sampler(std::uint64_t seed = 1) {
  return SubordinatorSampler::make_default(SubordinatorModel::stable(1.0), seed);
}

}  // namespace

TEST_CASE("conditional Gaussian estimator matches the Cauchy density") {
  const std::vector<double> radii{0.0, 0.5, 1.0, 2.0};
  for (double t : {0.1, 1.0}) {
    const auto est = free_kernel_mc(cauchy_sampler(), t, radii, 1, 100000, 4);
    CHECK(est.n == 100000);
    for (std::size_t j = 0; j < radii.size(); ++j) {
      INFO("t=" << t << " r=" << radii[j] << " est=" << est.values[j] << " se=" << est.std_err[j]);
      CHECK(std::abs(est.values[j] - cauchy(t, radii[j])) <= 3.0 * est.std_err[j]);
      CHECK(est.std_err[j] > 0.0);
    }
  }
}

TEST_CASE("histogram estimator agrees with the conditional estimator") {
  const std::vector<double> radii{0.25, 1.0, 2.0};
  const auto h = free_kernel_mc(cauchy_sampler(2), 1.0, radii, 1, 100000, 4, DensityMethod::histogram, 0.05);
  CHECK(h.method == DensityMethod::histogram);
  for (std::size_t j = 0; j < radii.size(); ++j) {
    CHECK(h.values[j] == doctest::Approx(cauchy(1.0, radii[j])).epsilon(0.05));
  }
  // conditional variance is far smaller
  const auto c = free_kernel_mc(cauchy_sampler(2), 1.0, radii, 1, 100000, 4);
  for (std::size_t j = 0; j < radii.size(); ++j) CHECK(c.std_err[j] < h.std_err[j]);
}

TEST_CASE("estimator is independent of worker count and depends on x only through |x|") {
  const auto a = free_kernel_mc(cauchy_sampler(3), 0.5, {0.0, 0.3, 1.7}, 2, 5000, 1);
  const auto b = free_kernel_mc(cauchy_sampler(3), 0.5, {0.0, 0.3, 1.7}, 2, 5000, 3);
  CHECK(a.values == b.values);
  CHECK(a.std_err == b.std_err);
  CHECK_THROWS_AS(free_kernel_mc(cauchy_sampler(), 0.0, {0.0}, 1, 10), DomainError);
  CHECK_THROWS_AS(free_kernel_mc(cauchy_sampler(), 1.0, {-1.0}, 1, 10), DomainError);
}

TEST_CASE("normalization and monotonicity in r") {
  std::vector<double> radii;
  const double h = 0.05;
  for (double r = 0.0; r <= 50.0 + 1e-9; r += h) radii.push_back(r);
  const auto est = free_kernel_mc(cauchy_sampler(4), 1.0, radii, 1, 100000, 4);
  double mass = 0.0;
  for (std::size_t j = 0; j + 1 < radii.size(); ++j) mass += 0.5 * h * (est.values[j] + est.values[j + 1]);
  mass *= 2.0;  // sphere area in d = 1
  MESSAGE("mass on [-50, 50] " << mass);
  CHECK(std::abs(mass - 1.0) < 0.02);
  for (std::size_t j = 1; j < radii.size(); ++j)
    CHECK(est.values[j] <= est.values[j - 1] + 3.0 * std::max(est.std_err[j], est.std_err[j - 1]));
}

TEST_CASE("Chapman-Kolmogorov in d = 1") {
  const double h = 0.02, L = 30.0, t = 1.0;
  std::vector<double> radii;
  for (double r = 0.0; r <= 2 * L + 3.0 + 1e-9; r += h) radii.push_back(r);
  const auto half = free_kernel_mc(cauchy_sampler(5), t / 2, radii, 1, 20000, 4);
  const auto full = free_kernel_mc(cauchy_sampler(6), t, radii, 1, 20000, 4);
  auto at = [&](const DensityEstimate& e, double x) {
    return e.values[static_cast<std::size_t>(std::lround(std::abs(x) / h))];
  };
  const int ny = static_cast<int>(std::lround(L / h));
  double worst = 0.0, peak = 0.0;
  for (double x = -3.0; x <= 3.0 + 1e-9; x += 0.1) {
    double conv = 0.0;
    for (int k = -ny; k <= ny; ++k) {
      const double y = k * h;
      const double w = (k == -ny || k == ny) ? 0.5 : 1.0;
      conv += w * h * at(half, y) * at(half, x - y);
    }
    worst = std::max(worst, std::abs(conv - at(full, x)));
    peak = std::max(peak, at(full, x));
  }
  MESSAGE("Chapman-Kolmogorov sup error " << worst / peak);
  CHECK(worst <= 0.03 * peak);
}

TEST_CASE("free envelope examples") {
  const auto cauchy_model = SubordinatorModel::stable(1.0);
  CHECK(free_envelope_upper(cauchy_model, 0.01, 1.0, 1, 1.0) == doctest::Approx(0.005).epsilon(1e-10));
  for (double t : {0.01, 0.3, 2.0}) {
    CHECK(free_envelope_upper(cauchy_model, t, 0.0, 1) == doctest::Approx(1.0 / t).epsilon(1e-9));
    CHECK(free_envelope_upper(cauchy_model, t, 0.0, 3) == doctest::Approx(std::pow(t, -3.0)).epsilon(1e-9));
  }
  for (const auto& m : {cauchy_model, SubordinatorModel::log_example_i(1.0), SubordinatorModel::stable(0.6)}) {
    for (double t : {1e-3, 1e-2, 0.1, 1.0}) {
      for (double r : {0.0, 0.01, 0.1, 0.5, 1.0, 3.0}) {
        for (int d : {1, 2, 3}) {
          CHECK(free_envelope_lower(m, t, r, d, 1.0) <= free_envelope_upper(m, t, r, d, 0.5));
          CHECK(free_envelope_lower(m, t, r, d, 0.5) == free_envelope_upper(m, t, r, d, 0.5));
        }
      }
    }
  }
}

TEST_CASE("uppcom ratio is bounded above and below") {
  for (const auto& m : {SubordinatorModel::stable(1.0), SubordinatorModel::log_example_i(1.0)}) {
    double lo = 1e300, hi = 0.0;
    for (double t : {1e-3, 1e-2, 0.1, 1.0}) {
      for (double r : {1e-3, 1e-2, 0.1, 0.5, 1.0, 5.0}) {
        for (int d : {1, 2}) {
          const double q = uppcom_check(m, t, r, d);
          lo = std::min(lo, q);
          hi = std::max(hi, q);
          // H <= phi
          CHECK(t * eval_H(m, 1 / (r * r)) <= t * eval_phi(m, 1 / (r * r)));
        }
      }
    }
    MESSAGE(m.id() << " uppcom ratio in [" << lo << ", " << hi << "]");
    CHECK(lo > 0.0);
    CHECK(std::isfinite(hi));
  }
}

TEST_CASE("free-kernel sandwich on the Cauchy grid") {
  const auto m = SubordinatorModel::stable(1.0);
  std::vector<double> radii;
  for (double r = 0.0; r <= 5.0; r += 0.25) radii.push_back(r);
  double c = 1.0;
  for (double t : {1e-3, 1e-2, 0.1, 1.0}) {
    const auto est = free_kernel_mc(cauchy_sampler(7), t, radii, 1, 20000, 4);
    for (std::size_t j = 0; j < radii.size(); ++j) {
      const double up = free_envelope_upper(m, t, radii[j], 1);
      const double lo = free_envelope_lower(m, t, radii[j], 1);
      c = std::max({c, (est.values[j] - 3 * est.std_err[j]) / up, lo / (est.values[j] + 3 * est.std_err[j])});
    }
  }
  MESSAGE("fitted free-kernel constant " << c);
  CHECK(c >= 1.0);
  CHECK(c <= 50.0);
}
