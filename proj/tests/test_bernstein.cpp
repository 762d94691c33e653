#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "sbm/bernstein.hpp"
#include "sbm/errors.hpp"
#include "sbm/quadrature.hpp"

using namespace sbm;

namespace {

std::vector<SubordinatorModel> catalog() {
  return {SubordinatorModel::stable(0.6), SubordinatorModel::stable(1.0), SubordinatorModel::stable(1.4),
          SubordinatorModel::log_example_i(0.5), SubordinatorModel::log_example_i(1.0),
          SubordinatorModel::log_example_i(1.5), SubordinatorModel::log_example_ii(),
          SubordinatorModel::log_example_i(1.0, true)};
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return g;
}

}  // namespace

TEST_CASE("catalog ids round-trip through the parser") {
  for (const auto& m : catalog()) CHECK(SubordinatorModel::parse(m.id()).id() == m.id());
  CHECK(SubordinatorModel::parse("stable:alpha=1.2").param() == 1.2);
  CHECK(SubordinatorModel::parse("log-example-i:beta=1.0").kind() == ModelKind::log_example_i);
  CHECK_THROWS_AS(SubordinatorModel::parse("gamma:a=1"), ConfigError);
  CHECK_THROWS_AS(SubordinatorModel::parse("stable:alpha=x"), ConfigError);
  CHECK_THROWS_AS(SubordinatorModel::parse("stable:beta=1"), ConfigError);
  CHECK_THROWS_AS(SubordinatorModel::parse("stable:alpha=2.5"), DomainError);
}

TEST_CASE("eval_phi examples") {
  CHECK(eval_phi(SubordinatorModel::stable(1.0), 4.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(eval_phi(SubordinatorModel::log_example_i(1.0), 1.0) == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-14));
  CHECK(eval_phi(SubordinatorModel::log_example_i(1.0), 1.0) == doctest::Approx(1.442695).epsilon(1e-6));
  CHECK_THROWS_AS(eval_phi(SubordinatorModel::stable(1.0), 0.0), DomainError);
  CHECK_THROWS_AS(eval_phi(SubordinatorModel::stable(1.0), -1.0), DomainError);
  for (const auto& m : catalog()) {
    double prev = eval_phi(m, 1e-2);
    for (double l : {1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
      const double v = eval_phi(m, l);
      CHECK(v > 0.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("log-example-ii series and closed form agree at the switch") {
  const auto m = SubordinatorModel::log_example_ii();
  const double below = m.phi(0.01 * (1 - 1e-12));
  const double above = m.phi(0.01 * (1 + 1e-12));
  CHECK(below == doctest::Approx(above).epsilon(1e-11));
  CHECK(m.H(0.01 * (1 - 1e-12)) == doctest::Approx(m.H(0.01 * (1 + 1e-12))).epsilon(1e-8));
  CHECK(m.phi_prime(0.01 * (1 - 1e-12)) == doctest::Approx(m.phi_prime(0.01 * (1 + 1e-12))).epsilon(1e-11));
}

TEST_CASE("eval_H examples") {
  CHECK(eval_H(SubordinatorModel::stable(1.0), 4.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(eval_H(SubordinatorModel::stable(1.99), 1.0) == doctest::Approx(0.005).epsilon(1e-12));
  // H(l) (log l)^2 / l stays within a fixed band on [2, 1e6].
  const auto m = SubordinatorModel::log_example_i(1.0);
  double lo = 1e300, hi = 0.0;
  for (double l : log_grid(2.0, 1e6, 200)) {
    const double q = eval_H(m, l) * std::pow(std::log(l), 2) / l;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  const double c = std::min(lo, 1.0 / hi);
  MESSAGE("H(l)(log l)^2/l in [" << lo << ", " << hi << "], c = " << c);
  CHECK(c > 0.0);
  CHECK(lo >= c);
  CHECK(hi <= 1.0 / c);
}

TEST_CASE("H agrees with phi - l phi' and is nonnegative, nondecreasing") {
  for (const auto& m : catalog()) {
    double prev = 0.0;
    for (double l : log_grid(1e-4, 1e8, 120)) {
      const double direct = m.phi(l) - l * m.phi_prime(l);
      const double h = eval_H(m, l);
      CHECK(h >= 0.0);
      CHECK(h >= prev * (1 - 1e-12));
      CHECK(h == doctest::Approx(direct).epsilon(1e-7).scale(1e-12 * m.phi(l)));
      CHECK(h == doctest::Approx(l * m.H_over_lambda_log(std::log(l))).epsilon(1e-12));
      prev = h;
    }
  }
}

TEST_CASE("phi_prime matches a central difference") {
  for (const auto& m : catalog()) {
    for (double l : log_grid(1e-3, 1e6, 25)) {
      const double h = 1e-5 * l;
      const double fd = (m.phi(l + h) - m.phi(l - h)) / (2 * h);
      CHECK(m.phi_prime(l) == doctest::Approx(fd).epsilon(1e-7));
      CHECK(m.phi_prime(l) > 0.0);
    }
  }
}

TEST_CASE("Bernstein-function shape: concavity and lemma-type growth bounds") {
  for (const auto& m : catalog()) {
    const auto grid = log_grid(1e-3, 1e6, 60);
    for (double l : grid) {
      const double h = 1e-3 * l;
      CHECK(m.phi(l + h) - 2 * m.phi(l) + m.phi(l - h) <= 1e-12 * m.phi(l));
      for (double x : {1.0, 1.5, 3.0, 10.0, 1e3}) {
        CHECK(m.phi(l * x) <= x * m.phi(l) * (1 + 1e-12));
        CHECK(m.H(l * x) <= x * x * m.H(l) * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("normalization option") {
  const auto m = SubordinatorModel::log_example_i(1.0, true);
  CHECK(m.normalized());
  CHECK(std::abs(m.phi(1.0) - 1.0) <= 1e-12);
  const auto m2 = SubordinatorModel::parse("log-example-ii:normalize=1");
  CHECK(std::abs(m2.phi(1.0) - 1.0) <= 1e-12);
  CHECK(SubordinatorModel::stable(1.3).phi(1.0) == 1.0);
}

TEST_CASE("Phi and psi examples and monotonicity") {
  const auto cauchy = SubordinatorModel::stable(1.0);
  CHECK(eval_Phi(cauchy, 0.3) == doctest::Approx(0.3).epsilon(1e-14));
  // psi(r) = 1/H(r^-2) = 2r for H(l) = l^{1/2}/2.
  CHECK(eval_psi(cauchy, 0.3) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK_THROWS_AS(eval_Phi(cauchy, 1e-200), RangeError);
  const auto ex = SubordinatorModel::log_example_i(1.0);
  double lo = 1e300, hi = 0;
  for (double r : log_grid(1e-8, 0.5, 200)) {
    const double q = eval_Phi(ex, r) / (r * r * std::log(1.0 / r));
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  MESSAGE("Phi(r)/(r^2 log 1/r) in [" << lo << ", " << hi << "]");
  CHECK(hi / lo < 5.0);
  for (const auto& m : catalog()) {
    double pp = 0.0, ps = 0.0;
    for (double r : log_grid(1e-4, 10.0, 80)) {
      const double P = eval_Phi(m, r);
      const double S = eval_psi(m, r);
      CHECK(P > pp);
      CHECK(S > ps);
      CHECK(S >= P * (1 - 1e-12));
      pp = P;
      ps = S;
    }
  }
}

TEST_CASE("inversion") {
  const auto cauchy = SubordinatorModel::stable(1.0);
  CHECK(invert_phi(cauchy, 2.0) == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(invert_Phi(cauchy, 0.07) == doctest::Approx(0.07).epsilon(1e-10));
  const auto ex = SubordinatorModel::log_example_i(1.0);
  const double root = invert_phi(ex, 100.0);
  CHECK(std::abs(100.0 * std::log1p(std::sqrt(root)) - root) < 1e-8 * root);
  CHECK(std::abs(eval_phi(ex, root) - 100.0) < 1e-8);
  CHECK_THROWS_AS(invert_phi(cauchy, 0.0), DomainError);
  CHECK_THROWS_AS(invert_phi(cauchy, 1e200), RangeError);
  for (const auto& m : catalog()) {
    for (double l : log_grid(1e-4, 1e6, 50)) {
      CHECK(invert_phi(m, eval_phi(m, l)) == doctest::Approx(l).epsilon(1e-8));
    }
    for (double r : log_grid(1e-3, 1.0, 10)) CHECK(invert_Phi(m, eval_Phi(m, r)) == doctest::Approx(r).epsilon(1e-8));
  }
}

TEST_CASE("scaling certificates") {
  const auto lgrid = log_grid(1e-3, 1e5, 30);
  const auto tgrid = log_grid(1.0, 1e4, 12);
  const auto m = SubordinatorModel::stable(1.2);
  for (auto target : {ScalingTarget::phi, ScalingTarget::H}) {
    const auto cert = estimate_scaling(m, target, 0.0, lgrid, tgrid);
    CHECK(cert.gamma_hat == doctest::Approx(0.6).epsilon(1e-3));
    CHECK(cert.delta_hat == doctest::Approx(0.6).epsilon(1e-3));
    CHECK(cert.holds(m));
    CHECK(cert.grid.size() == lgrid.size() * tgrid.size());
  }
  const auto ex = SubordinatorModel::log_example_i(1.0);
  const auto cert = estimate_scaling(ex, ScalingTarget::H, 2.0, log_grid(2.5, 1e8, 40), tgrid);
  MESSAGE("log-example-i H indices: " << cert.gamma_hat << " .. " << cert.delta_hat);
  CHECK(cert.gamma_hat > 0.5);
  CHECK(cert.delta_hat < 2.0);
  CHECK(cert.holds(ex));
  // Tampering with the witnesses breaks the invariant.
  auto bad = cert;
  bad.gamma_hat = cert.delta_hat + 0.1;
  CHECK_FALSE(bad.holds(ex));
  CHECK_THROWS_AS(estimate_scaling(m, ScalingTarget::phi, 1.0, {0.5}, tgrid), DomainError);
  CHECK_THROWS_AS(estimate_scaling(m, ScalingTarget::phi, 0.0, {1.0}, {0.5}), DomainError);
}

TEST_CASE("Phi-psi identity") {
  CHECK(check_identity_Phi_psi(SubordinatorModel::stable(1.0), 0.3) < 1e-10);
  CHECK(check_identity_Phi_psi(SubordinatorModel::stable(0.5), 1.0) < 1e-8);
  CHECK(check_identity_Phi_psi(SubordinatorModel::log_example_i(1.0), 0.25) < 1e-6);
  for (const auto& m : catalog())
    for (double r : log_grid(1e-3, 1.0, 15)) CHECK(check_identity_Phi_psi(m, r) < 1e-6);
}

TEST_CASE("renewal envelope") {
  const auto cauchy = SubordinatorModel::stable(1.0);
  const auto b = renewal_envelope(cauchy, 0.09);
  CHECK(b.lower == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(b.upper == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(renewal_envelope(cauchy, 0.05).upper <= renewal_envelope(cauchy, 0.06).upper);
  const auto ex = SubordinatorModel::log_example_i(1.0);
  const auto e = renewal_envelope(ex, 0.1, 2.0);
  CHECK(std::abs(e.upper / 2.0 - std::sqrt(eval_Phi(ex, 0.1))) < 1e-10);
  CHECK(e.lower * 4.0 == doctest::Approx(e.upper));
}

TEST_CASE("Stieltjes density reproduces phi") {
  // phi(l) = int m(s) l / (s (l + s)) ds for complete Bernstein functions.
  // In w = log(s - shift) the integrand decays only like 1/w^2 for the log
  // examples, so the upper limit is infinite.
  for (const auto& m : catalog()) {
    for (double l : {0.3, 1.0, 7.0, 150.0}) {
      QuadratureOptions opts;
      opts.abs_tol = 1e-14;
      opts.rel_tol = 1e-10;
      const double shift = m.stieltjes_shift();
      auto f = [&](double w) {
        return m.stieltjes_over_s_log(w) * l / (1.0 + (l + shift) * std::exp(-w));
      };
      const double v = integrate_pieces(f, -250.0, 40.0, opts).value +
                       integrate(f, 40.0, std::numeric_limits<double>::infinity(), opts).value;
      CHECK(v == doctest::Approx(m.phi(l)).epsilon(1e-8));
      // the two evaluations of m agree
      const double s = shift + 2.5;
      CHECK(m.stieltjes_density(s) / s == doctest::Approx(m.stieltjes_over_s_log(std::log(2.5))).epsilon(1e-12));
    }
  }
}

TEST_CASE("Levy density mu reproduces -phi''") {
  // -phi''(l) = int t^2 e^{-l t} mu(t) dt; the t^2 weight keeps both ends
  // integrable for every catalog entry.
  for (const auto& m : {SubordinatorModel::stable(1.0), SubordinatorModel::stable(1.4),
                        SubordinatorModel::log_example_i(1.0), SubordinatorModel::log_example_ii()}) {
    for (double l : {0.5, 2.0}) {
      QuadratureOptions opts;
      opts.abs_tol = 0.0;
      opts.rel_tol = 1e-8;
      opts.piece_width = 2.0;
      auto f = [&](double t) { return t * t * std::exp(-l * t) * m.mu(t); };
      const double v = integrate_log(f, 1e-25, 80.0 / l, opts).value;
      const double h = 1e-4 * l;
      const double second = -(m.phi_prime(l + h) - m.phi_prime(l - h)) / (2 * h);
      CHECK(v == doctest::Approx(second).epsilon(1e-6));
    }
  }
  const auto cauchy = SubordinatorModel::stable(1.0);
  CHECK(cauchy.mu(1.0) == doctest::Approx(1.0 / (2.0 * std::sqrt(std::numbers::pi))).epsilon(1e-14));
}
