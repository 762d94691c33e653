#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "sbm/domain.hpp"
#include "sbm/errors.hpp"

using namespace sbm;

namespace {

std::vector<Domain> catalog() {
  return {Domain::full_space(2),
          Domain::half_space(1),
          Domain::half_space(3),
          Domain::ball(origin(2), 1.0),
          Domain::ball(make_point({0.5, -1.0, 2.0}), 0.7),
          Domain::exterior_ball(origin(2), 1.0),
          Domain::interval_union({{-3.0, -1.0}, {1.0, 3.0}, {4.0, 4.5}}, 0.5),
          Domain::annulus(origin(3), 1.0, 2.0)};
}

}  // namespace

TEST_CASE("boundary distance examples") {
  const auto ball = Domain::ball(origin(2), 1.0);
  CHECK(ball.delta(make_point({0.0, 0.0})) == 1.0);
  CHECK(ball.delta(make_point({0.6, 0.0})) == doctest::Approx(0.4));
  CHECK(ball.delta(make_point({2.0, 0.0})) == 0.0);
  CHECK_FALSE(ball.contains(make_point({1.0, 0.0})));
  const auto half = Domain::half_space(2);
  CHECK(half.delta(make_point({-7.0, 0.25})) == 0.25);
  CHECK_FALSE(half.contains(make_point({3.0, -0.1})));
  CHECK(half.reflect(make_point({1.0, 2.0})) == make_point({1.0, -2.0}));
  CHECK(std::isinf(Domain::full_space(1).delta(origin(1))));
  const auto iu = Domain::interval_union({{1.0, 3.0}, {-3.0, -1.0}}, 0.5);
  CHECK(iu.delta(make_point({2.5})) == doctest::Approx(0.5));
  CHECK(iu.delta(make_point({-2.0})) == doctest::Approx(1.0));
  CHECK(iu.delta(make_point({0.0})) == 0.0);
  const auto ann = Domain::annulus(origin(2), 1.0, 2.0);
  CHECK(ann.delta(make_point({1.5, 0.0})) == doctest::Approx(0.5));
  CHECK(ann.delta(make_point({0.2, 0.0})) == 0.0);
  CHECK(Domain::exterior_ball(origin(1), 1.0).delta(make_point({3.0})) == doctest::Approx(2.0));
}

TEST_CASE("construction rules") {
  CHECK_THROWS_AS(Domain::interval_union({{0.0, 1.0}, {1.1, 2.0}}, 0.5), DomainError);
  CHECK_THROWS_AS(Domain::interval_union({{0.0, 0.2}}, 0.5), DomainError);
  CHECK_THROWS_AS(Domain::annulus(origin(2), 2.0, 1.0), DomainError);
  CHECK_THROWS_AS(Domain::ball(origin(2), 0.0), DomainError);
  CHECK_THROWS_AS(Domain::half_space(5), DomainError);
  CHECK_THROWS_AS(Domain::ball(origin(2), 1.0).delta(origin(3)), DomainError);
  CHECK(Domain::ball(origin(2), 1.0).bounded());
  CHECK_FALSE(Domain::half_space(2).bounded());
}

TEST_CASE("parser round-trips ids") {
  for (const auto& D : catalog()) {
    const auto back = Domain::parse(D.id(), D.dim());
    CHECK(back.id() == D.id());
  }
  CHECK(Domain::parse("ball:R=2", 3).radius() == 2.0);
  CHECK(Domain::parse("ball:R=2;c=1/2", 2).center() == make_point({1.0, 2.0}));
  CHECK_THROWS_AS(Domain::parse("cube", 2), ConfigError);
  CHECK_THROWS_AS(Domain::parse("ball:r=1", 2), ConfigError);
  CHECK_THROWS_AS(Domain::parse("interval_union:0,1,2", 1), ConfigError);
}

TEST_CASE("contains iff delta > 0, and delta is 1-Lipschitz") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (const auto& D : catalog()) {
    for (int k = 0; k < 4000; ++k) {
      Point x(D.dim()), y(D.dim());
      for (int i = 0; i < D.dim(); ++i) {
        x(i) = u(gen);
        y(i) = x(i) + 0.1 * u(gen);
      }
      const double dx = D.delta(x), dy = D.delta(y);
      CHECK(D.contains(x) == (dx > 0.0));
      if (std::isfinite(dx)) CHECK(std::abs(dx - dy) <= (x - y).norm() * (1 + 1e-12) + 1e-15);
    }
  }
}
