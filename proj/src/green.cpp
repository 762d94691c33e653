#include "sbm/green.hpp"

#include <algorithm>
#include <cmath>

#include "sbm/errors.hpp"
#include "sbm/free_kernel.hpp"
#include "sbm/parallel.hpp"

namespace sbm {

std::vector<double> green_time_grid(double t_max, std::size_t m, const GreenOptions& opts) {
  if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
  if (m < 2) throw DomainError("green_mc needs m >= 2");
  const double h = t_max / static_cast<double>(m);
  std::vector<double> times;
  const std::size_t g = opts.geometric_points;
  for (std::size_t k = 0; k < g; ++k)
    times.push_back(h * std::pow(opts.geometric_span, static_cast<double>(g - k) / static_cast<double>(g)));
  for (std::size_t k = 1; k <= m; ++k) times.push_back(k == m ? t_max : h * static_cast<double>(k));
  return times;
}

GreenEstimate green_mc(const SubordinatorSampler& sampler, const Domain& domain, const Point& x, const Point& y,
                       double t_max, std::size_t n, std::size_t m, unsigned workers, const GreenOptions& opts) {
  if (!domain.bounded()) throw DomainError("green_mc requires a bounded domain");
  if (!domain.contains(x) || !domain.contains(y)) throw DomainError("x and y must lie in D");
  const double r = (x - y).norm();
  if (!(r > 0.0)) throw DomainError("the Green function is singular at x = y");
  if (n == 0) throw DomainError("green_mc requires n >= 1");
  const int d = domain.dim();
  const auto times = green_time_grid(t_max, m, opts);
  const std::size_t K = times.size();

  // uniform-grid indices used for the survival fit
  std::vector<std::size_t> fit_idx;
  for (std::size_t k = 0; k < K; ++k)
    if (times[k] >= opts.tail_window * t_max * (1 - 1e-12)) fit_idx.push_back(k);
  if (fit_idx.size() > 12) {
    std::vector<std::size_t> thin;
    for (std::size_t i = 0; i < 12; ++i) thin.push_back(fit_idx[i * (fit_idx.size() - 1) / 11]);
    fit_idx = thin;
  }

  struct ChunkResult {
    std::vector<double> body;  // trapezoid integral up to t_max, per path
    std::vector<double> last;  // integrand at t_max, per path
    std::vector<double> alive;
  };
  auto chunks = run_chunks(n, workers, [&](std::size_t begin, std::size_t end) {
    ChunkResult res;
    res.alive.assign(fit_idx.size(), 0.0);
    std::vector<double> s_path;
    for (std::size_t i = begin; i < end; ++i) {
      Philox rng = sampler.rng(i);
      const KilledOutcome o = walk_killed(sampler, domain, x, times, rng, opts.killing, &s_path);
      const std::size_t exit_k = o.survived ? K : o.exit_index - 1;  // 0-based observation index
      double integral = 0.0, prev_t = 0.0, prev_z = 0.0, z = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        z = gaussian_kernel(s_path[k], r, d);
        if (k >= exit_k) z -= gaussian_kernel(s_path[k] - o.s_exit, (o.position - y).norm(), d);
        integral += 0.5 * (times[k] - prev_t) * (z + prev_z);
        prev_t = times[k];
        prev_z = z;
      }
      res.body.push_back(integral);
      res.last.push_back(z);
      for (std::size_t j = 0; j < fit_idx.size(); ++j)
        if (fit_idx[j] < exit_k) res.alive[j] += 1.0;
    }
    return res;
  });

  std::vector<double> p(fit_idx.size(), 0.0), p_err(fit_idx.size()), t_fit(fit_idx.size());
  for (const auto& c : chunks)
    for (std::size_t j = 0; j < fit_idx.size(); ++j) p[j] += c.alive[j];
  // keep the times with at least 50 survivors
  std::vector<double> tf, pf, ef;
  for (std::size_t j = 0; j < fit_idx.size(); ++j) {
    if (p[j] < 50.0) continue;
    const double q = p[j] / static_cast<double>(n);
    tf.push_back(times[fit_idx[j]]);
    pf.push_back(q);
    ef.push_back(std::sqrt(q * (1.0 - q) / static_cast<double>(n)));
  }

  GreenEstimate est;
  est.n = n;
  double inv_lambda = 0.0;
  if (tf.size() >= 2) {
    est.lambda = fit_decay(tf, pf, ef);
    if (est.lambda.rate > 0.0) inv_lambda = 1.0 / est.lambda.rate;
  }
  RunningStats total, tail;
  for (const auto& c : chunks) {
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      total.add(c.body[i] + c.last[i] * inv_lambda);
      tail.add(c.last[i] * inv_lambda);
    }
  }
  // no survivor at all in the fit window means no mass is left; a few survivors cannot be fitted
  if (inv_lambda == 0.0 && !fit_idx.empty() && p.front() > 0.0)
    throw InsufficientSamplesError("too few surviving paths to fit the tail decay; raise n or lower t_max");
  est.value = total.mean;
  est.std_err = total.stderr_of_mean();
  est.tail = tail.mean;
  est.tail_flagged = std::abs(est.tail) > opts.tail_flag * std::abs(est.value);
  return est;
}

}  // namespace sbm
