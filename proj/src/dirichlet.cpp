#include "sbm/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sbm/errors.hpp"
#include "sbm/free_kernel.hpp"
#include "sbm/parallel.hpp"
#include "sbm/quadrature.hpp"

namespace sbm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_inside(const Domain& domain, const Point& x, const char* what) {
  if (x.size() != domain.dim()) throw DomainError(std::string(what) + " has the wrong dimension");
  if (!domain.contains(x)) throw DomainError(std::string(what) + " must lie in D");
}

std::vector<double> uniform_times(double t, std::size_t m) {
  if (!(t > 0.0)) throw DomainError("horizon must be positive");
  if (m == 0) throw DomainError("number of grid steps must be >= 1");
  std::vector<double> times(m);
  for (std::size_t k = 1; k <= m; ++k) times[k - 1] = (k == m) ? t : t * static_cast<double>(k) / m;
  return times;
}

Estimate finish(const RunningStats& st, bool clip) {
  Estimate e;
  e.raw = st.mean;
  e.value = clip ? std::max(0.0, st.mean) : st.mean;
  e.std_err = st.stderr_of_mean();
  e.n = static_cast<std::size_t>(st.n);
  return e;
}

}  // namespace

KilledOutcome walk_killed(const SubordinatorSampler& sampler, const Domain& domain, const Point& x,
                          const std::vector<double>& times, Philox& rng, const KillingOptions& opts,
                          std::vector<double>* s_path) {
  const int d = domain.dim();
  const bool unbounded_delta = domain.kind() == DomainKind::full_space;
  KilledOutcome out;
  out.exit_index = times.size() + 1;
  Point pos = x;
  Point step(d);
  double prev_t = 0.0;
  double s = 0.0;
  double delta_prev = domain.delta(x);
  if (s_path) s_path->resize(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double dt = times[k] - prev_t;
    if (!(dt > 0.0)) throw DomainError("observation times must be strictly increasing and start after 0");
    prev_t = times[k];
    const double ds = sampler.draw(dt, rng);
    s += ds;
    if (s_path) (*s_path)[k] = s;
    if (!out.survived) continue;
    const double sd = std::sqrt(2.0 * ds);
    for (int c = 0; c < d; ++c) step(c) = sd * standard_normal(rng);
    pos += step;
    const double delta = unbounded_delta ? kInf : domain.delta(pos);
    bool killed = !(delta > 0.0);
    if (opts.bridge && !unbounded_delta) {
      const double u = uniform_open(rng);
      if (!killed && ds > 0.0 && u < std::exp(-delta_prev * delta / ds)) killed = true;
    }
    delta_prev = delta;
    if (killed) {
      out.survived = false;
      out.exit_index = k + 1;
      out.exit_time = times[k];
      out.s_exit = s;
      out.position = pos;
      if (!s_path) {
        out.s_end = s;
        return out;
      }
    }
  }
  out.s_end = s;
  if (out.survived) out.position = pos;
  return out;
}

KilledOutcome simulate_killed(const SubordinatorSampler& sampler, const Domain& domain, const Point& x, double t,
                              std::size_t m, Philox& rng, const KillingOptions& opts) {
  require_inside(domain, x, "start point");
  std::vector<double> s_path;
  KilledOutcome out = walk_killed(sampler, domain, x, uniform_times(t, m), rng, opts, &s_path);
  return out;
}

KilledOutcome simulate_killed(const SubordinatorSampler& sampler, const Domain& domain, const Point& x, double t,
                              std::size_t m, std::uint64_t substream, const KillingOptions& opts) {
  Philox rng = sampler.rng(substream);
  return simulate_killed(sampler, domain, x, t, m, rng, opts);
}

Estimate survival_prob(const SubordinatorSampler& sampler, const Domain& domain, const Point& x, double t,
                       std::size_t n, std::size_t m, unsigned workers, const KillingOptions& opts) {
  require_inside(domain, x, "start point");
  if (n == 0) throw DomainError("survival_prob requires n >= 1");
  const auto times = uniform_times(t, m);
  auto chunks = run_chunks(n, workers, [&](std::size_t begin, std::size_t end) {
    RunningStats st;
    for (std::size_t i = begin; i < end; ++i) {
      Philox rng = sampler.rng(i);
      st.add(walk_killed(sampler, domain, x, times, rng, opts).survived ? 1.0 : 0.0);
    }
    return st;
  });
  RunningStats total;
  for (const auto& c : chunks) total.merge(c);
  return finish(total, false);
}

std::vector<Estimate> killed_kernel_mc(const SubordinatorSampler& sampler, const Domain& domain, const Point& x,
                                       const std::vector<Point>& ys, double t, std::size_t n, std::size_t m,
                                       unsigned workers, const KillingOptions& opts) {
  require_inside(domain, x, "x");
  for (const auto& y : ys) require_inside(domain, y, "y");
  if (n == 0) throw DomainError("killed_kernel_mc requires n >= 1");
  const int d = domain.dim();
  std::vector<double> r(ys.size());
  for (std::size_t j = 0; j < ys.size(); ++j) r[j] = (x - ys[j]).norm();

  if (domain.kind() == DomainKind::full_space) {
    const auto free = free_kernel_mc(sampler, t, r, d, n, workers);
    std::vector<Estimate> out(ys.size());
    for (std::size_t j = 0; j < ys.size(); ++j) out[j] = {free.values[j], free.std_err[j], n, free.values[j]};
    return out;
  }

  const auto times = uniform_times(t, m);
  auto chunks = run_chunks(n, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<RunningStats> st(ys.size());
    std::vector<double> s_path;
    for (std::size_t i = begin; i < end; ++i) {
      Philox rng = sampler.rng(i);
      const KilledOutcome o = walk_killed(sampler, domain, x, times, rng, opts, &s_path);
      for (std::size_t j = 0; j < ys.size(); ++j) {
        double z = gaussian_kernel(o.s_end, r[j], d);
        if (!o.survived) z -= gaussian_kernel(o.s_end - o.s_exit, (o.position - ys[j]).norm(), d);
        st[j].add(z);
      }
    }
    return st;
  });
  std::vector<Estimate> out(ys.size());
  for (std::size_t j = 0; j < ys.size(); ++j) {
    RunningStats total;
    for (const auto& c : chunks) total.merge(c[j]);
    out[j] = finish(total, true);
  }
  return out;
}

Estimate killed_kernel_mc(const SubordinatorSampler& sampler, const Domain& domain, const Point& x, const Point& y,
                          double t, std::size_t n, std::size_t m, unsigned workers, const KillingOptions& opts) {
  return killed_kernel_mc(sampler, domain, x, std::vector<Point>{y}, t, n, m, workers, opts).front();
}

double half_space_gaussian_kernel(const Domain& domain, double s, const Point& x, const Point& y) {
  const int d = domain.dim();
  return gaussian_kernel(s, (x - y).norm(), d) - gaussian_kernel(s, (x - domain.reflect(y)).norm(), d);
}

Estimate skbm_lower_quadrature(const SubordinatorSampler& sampler, const Domain& domain, double t, const Point& x,
                               const Point& y, std::size_t n, unsigned workers) {
  if (domain.kind() != DomainKind::half_space)
    throw UnsupportedError("subordinate killed Brownian motion kernel is implemented for the half-space only");
  if (!(t > 0.0)) throw DomainError("t must be positive");
  const int d = domain.dim();
  if (x.size() != d || y.size() != d || x(d - 1) < 0.0 || y(d - 1) < 0.0)
    throw DomainError("x and y must lie in the closed half-space");
  if (x(d - 1) == 0.0 || y(d - 1) == 0.0) return {0.0, 0.0, n, 0.0};

  const SubordinatorModel& model = sampler.model();
  if (model.is_stable()) {
    // S_t = c (A(U)/E)^{(1-b)/b}; integrate over u in (0,1) and v = log E.
    const double b = model.stable_index();
    const double c = std::pow(t * model.scale(), 1.0 / b);
    const double p = (1.0 - b) / b;
    QuadratureOptions inner;
    inner.abs_tol = 0.0;
    inner.rel_tol = 1e-9;
    QuadratureOptions outer = inner;
    outer.rel_tol = 1e-8;
    auto in_u = [&](double u) {
      const double a = kanter_A(b, u);
      if (!std::isfinite(a) || a <= 0.0) return 0.0;
      auto f = [&](double v) {
        const double e = std::exp(v);
        const double s = c * std::pow(a / e, p);
        return e * std::exp(-e) * half_space_gaussian_kernel(domain, s, x, y);
      };
      return integrate_pieces(f, -60.0, 4.0, inner).value;
    };
    const double q = integrate(in_u, 0.0, 1.0, outer).value;
    return {q, 0.0, n, q};
  }
  const auto s = sample_S(sampler, t, n, workers);
  RunningStats st;
  for (double v : s) st.add(half_space_gaussian_kernel(domain, v, x, y));
  return finish(st, false);
}

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& y, const std::vector<double>& y_err) {
  if (t.size() < 2 || y.size() != t.size() || y_err.size() != t.size())
    throw DomainError("fit_decay needs at least two matching points");
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(y[i] > 0.0)) throw InsufficientSamplesError("decay fit needs positive values");
    const double rel = y_err[i] / y[i];
    const double w = rel > 0.0 ? 1.0 / (rel * rel) : 1.0;
    const double ly = -std::log(y[i]);
    sw += w;
    sx += w * t[i];
    sy += w * ly;
    sxx += w * t[i] * t[i];
    sxy += w * t[i] * ly;
  }
  const double det = sw * sxx - sx * sx;
  if (!(det > 0.0)) throw DomainError("decay fit needs distinct times");
  DecayFit fit;
  fit.rate = (sw * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.rate * sx) / sw;
  fit.std_err = std::sqrt(sw / det);
  return fit;
}

DecayFit estimate_lambda_D(const SubordinatorSampler& sampler, const Domain& domain, const Point& x,
                           const std::vector<double>& t_grid, std::size_t n, std::size_t m, unsigned workers) {
  if (!domain.bounded()) throw DomainError("estimate_lambda_D requires a bounded domain");
  require_inside(domain, x, "start point");
  if (t_grid.size() < 2) throw DomainError("estimate_lambda_D needs at least two times");
  std::vector<double> times = uniform_times(*std::max_element(t_grid.begin(), t_grid.end()), m);
  times.insert(times.end(), t_grid.begin(), t_grid.end());
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  auto chunks = run_chunks(n, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> alive(t_grid.size(), 0.0);
    for (std::size_t i = begin; i < end; ++i) {
      Philox rng = sampler.rng(i);
      const KilledOutcome o = walk_killed(sampler, domain, x, times, rng, {});
      const double exit = o.survived ? kInf : o.exit_time;
      for (std::size_t j = 0; j < t_grid.size(); ++j)
        if (exit > t_grid[j]) alive[j] += 1.0;
    }
    return alive;
  });
  std::vector<double> p(t_grid.size(), 0.0), err(t_grid.size());
  for (const auto& c : chunks)
    for (std::size_t j = 0; j < t_grid.size(); ++j) p[j] += c[j];
  const auto last = static_cast<std::size_t>(std::max_element(t_grid.begin(), t_grid.end()) - t_grid.begin());
  if (p[last] < 50.0)
    throw InsufficientSamplesError("fewer than 50 surviving paths at the largest time; raise n or lower t");
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    p[j] /= static_cast<double>(n);
    err[j] = std::sqrt(p[j] * (1.0 - p[j]) / static_cast<double>(n));
  }
  return fit_decay(t_grid, p, err);
}

}  // namespace sbm
