#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sbm/errors.hpp"
#include "sbm/quadrature.hpp"

using namespace sbm;

TEST_CASE("polynomial and gaussian integrals") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 3.0).value == doctest::Approx(9.0).epsilon(1e-13));
  const double g = integrate([](double x) { return std::exp(-x * x); }, -10.0, 10.0).value;
  CHECK(g == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("log substitution handles an integrable endpoint singularity") {
  // int_0^1 x^{-1/2} dx = 2, with the tiny piece below 1e-30 missing (2e-15).
  const double v = integrate_log([](double x) { return 1.0 / std::sqrt(x); }, 1e-30, 1.0).value;
  CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("pieces do not skip a narrow peak") {
  auto spike = [](double x) { return std::exp(-1e4 * (x - 37.3) * (x - 37.3)); };
  const double v = integrate_pieces(spike, 0.0, 100.0).value;
  CHECK(v == doctest::Approx(std::sqrt(std::numbers::pi / 1e4)).epsilon(1e-10));
}

TEST_CASE("infinite upper limit") {
  const double v = integrate([](double x) { return 1.0 / (x * x); }, 1.0, std::numeric_limits<double>::infinity()).value;
  CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("non-convergence is reported") {
  QuadratureOptions opts;
  opts.max_depth = 2;
  opts.abs_tol = 1e-14;
  opts.rel_tol = 1e-14;
  auto wild = [](double x) { return std::sin(1.0 / x) / x; };
  CHECK_THROWS_AS(integrate(wild, 1e-6, 1.0, opts), NumericError);
  CHECK_THROWS_AS(integrate_log(wild, -1.0, 1.0, opts), DomainError);
}
