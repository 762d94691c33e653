#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sbm/dirichlet.hpp"
#include "sbm/envelopes.hpp"
#include "sbm/errors.hpp"
#include "sbm/green.hpp"

using namespace sbm;

namespace {

// Green function of the Cauchy process on (-1, 1)
double cauchy_interval_green(double x, double y) {
  const double w = 1.0 - x * y + std::sqrt((1.0 - x * x) * (1.0 - y * y));
  return std::log(w / std::abs(x - y)) / std::numbers::pi;
}

SubordinatorSampler cauchy(std::uint64_t seed) {
  return SubordinatorSampler(SubordinatorModel::stable(1.0), SamplingScheme::exact_stable, 1e-4, seed);
}

}  // namespace

TEST_CASE("closed form reference") { CHECK(cauchy_interval_green(0.0, 0.5) == doctest::Approx(std::log(2.0 + std::sqrt(3.0)) / std::numbers::pi)); }

TEST_CASE("Cauchy Green function on the interval") {
  const auto D = Domain::ball(origin(1), 1.0);
  const auto sampler = cauchy(21);
  for (auto [xs, ys] : {std::pair{0.0, 0.5}, {-0.5, 0.3}, {0.2, 0.7}, {-0.8, -0.4}, {0.1, -0.1}}) {
    const auto g = green_mc(sampler, D, make_point({xs}), make_point({ys}), 6.0, 20000, 600);
    const double exact = cauchy_interval_green(xs, ys);
    MESSAGE("x=" << xs << " y=" << ys << " G=" << g.value << " +- " << g.std_err << " exact " << exact
                 << " tail " << g.tail << " lambda " << g.lambda.rate);
    CHECK(std::abs(g.value - exact) <= 0.1 * exact);
    CHECK_FALSE(g.tail_flagged);
  }
}

TEST_CASE("symmetry and consistency with the killed kernel") {
  const auto D = Domain::ball(origin(1), 1.0);
  const auto sampler = cauchy(5);
  const Point x = make_point({-0.3}), y = make_point({0.4});
  const auto a = green_mc(sampler, D, x, y, 5.0, 10000, 300);
  const auto b = green_mc(sampler.with_seed(6), D, y, x, 5.0, 10000, 300);
  CHECK(std::abs(a.value - b.value) <= 3.0 * std::hypot(a.std_err, b.std_err) + 0.02 * a.value);

  // crude time integral of p_D
  double integral = 0.0, prev_t = 0.0, prev_p = 0.0;
  for (double t : {0.02, 0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0}) {
    const double p = killed_kernel_mc(sampler.with_seed(7), D, x, y, t, 10000, 200).value;
    integral += 0.5 * (t - prev_t) * (p + prev_p);
    prev_t = t;
    prev_p = p;
  }
  MESSAGE("green " << a.value << " time integral " << integral << " + tail " << a.tail);
  CHECK(integral + a.tail == doctest::Approx(a.value).epsilon(0.1));
}

TEST_CASE("sandwich against the Green envelope") {
  const auto model = SubordinatorModel::stable(1.0);
  const auto D = Domain::ball(origin(1), 1.0);
  const auto sampler = cauchy(8);
  double lo = 1e300, hi = 0.0;
  for (auto [xs, ys] : {std::pair{0.0, 0.5}, {-0.9, 0.9}, {0.6, 0.95}, {-0.2, -0.1}}) {
    const Point x = make_point({xs}), y = make_point({ys});
    const double g = green_mc(sampler, D, x, y, 5.0, 5000, 300).value;
    const double q = g / green_envelope(model, D, x, y);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  MESSAGE("ratio range [" << lo << ", " << hi << "]");
  CHECK(lo > 1.0 / 50);
  CHECK(hi < 50.0);
}

TEST_CASE("green_mc argument checks") {
  const auto sampler = cauchy(1);
  CHECK_THROWS_AS(green_mc(sampler, Domain::half_space(1), make_point({1.0}), make_point({2.0}), 1.0, 10, 10),
                  DomainError);
  const auto D = Domain::ball(origin(1), 1.0);
  CHECK_THROWS_AS(green_mc(sampler, D, make_point({0.2}), make_point({0.2}), 1.0, 10, 10), DomainError);
  CHECK_THROWS_AS(green_mc(sampler, D, make_point({0.2}), make_point({1.5}), 1.0, 10, 10), DomainError);
}
