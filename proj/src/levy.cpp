#include "sbm/levy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "sbm/errors.hpp"
#include "sbm/parallel.hpp"
#include "sbm/quadrature.hpp"

namespace sbm {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double heat(double s, double r, int d) {
  return std::pow(4.0 * kPi * s, -0.5 * d) * std::exp(-r * r / (4.0 * s));
}

// int_0^inf e^{-sigma s} (4 pi s)^{-d/2} e^{-r^2/(4s)} ds
double heat_resolvent(double sigma, double r, int d) {
  const double z = r * std::sqrt(sigma);
  if (d == 1) return std::exp(-z) / (2.0 * std::sqrt(sigma));
  if (z > 700.0) return 0.0;
  const double nu = 1.0 - 0.5 * d;
  return 2.0 * std::pow(4.0 * kPi, -0.5 * d) * std::pow(r * r / (4.0 * sigma), 0.5 * nu) *
         std::cyl_bessel_k(std::abs(nu), z);
}

// Integral of f over (0, inf) where f vanishes fast below `lo` and decays like
// a power above `hi`; the part beyond `hi` is added from the fitted power law.
double integrate_power_tail(const Integrand& f, double lo, double hi, const QuadratureOptions& opts) {
  double total = integrate_log(f, lo, hi, opts).value;
  const double f1 = f(hi);
  const double f0 = f(hi / 2.0);
  if (f1 > 0.0 && f0 > 0.0) {
    const double q = std::log(f1 / f0) / std::log(2.0);  // f ~ s^q
    if (q < -1.0) total += -hi * f1 / (q + 1.0);
  }
  return total;
}

void require_dimension(int d) {
  if (d < 1) throw DomainError("dimension must be >= 1");
}

// 1 - e^{-z}(1 + z)
double one_minus_exp_poly(double z) {
  if (!std::isfinite(z)) return 1.0;
  if (z < 1e-3) return z * z * (0.5 - z / 3.0 + z * z / 8.0);
  return -std::expm1(-z) - z * std::exp(-z);
}

}  // namespace

double levy_density_j(const SubordinatorModel& model, double r, int d) {
  if (!(r > 0.0)) throw DomainError("j(r) requires r > 0");
  require_dimension(d);
  if (model.is_stable()) return levy_density_j_direct(model, r, d);
  QuadratureOptions opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-9;
  opts.piece_width = 2.0;
  const double shift = model.stieltjes_shift();
  auto f = [&](double w) {
    const double e = std::exp(w);
    const double sigma = shift + e;
    return model.stieltjes_over_s_log(w) * sigma * heat_resolvent(sigma, r, d) * e;
  };
  const double w_hi = 2.0 * std::log(800.0 / r);
  return integrate_pieces(f, std::min(-200.0, w_hi - 200.0), w_hi, opts).value;
}

double levy_density_j_direct(const SubordinatorModel& model, double r, int d) {
  if (!(r > 0.0)) throw DomainError("j(r) requires r > 0");
  require_dimension(d);
  QuadratureOptions opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-9;
  auto f = [&](double s) { return heat(s, r, d) * model.mu(s); };
  return integrate_power_tail(f, r * r / 3000.0, r * r * 1e10, opts);
}

double check_jdouble(const SubordinatorModel& model, int d, const std::vector<double>& r_grid) {
  double worst = 0.0;
  for (double r : r_grid) {
    if (!(r > 1.0)) throw DomainError("jdouble grid must lie in (1, inf)");
    worst = std::max(worst, levy_density_j(model, r, d) / levy_density_j(model, r + 1.0, d));
  }
  if (!std::isfinite(worst)) throw NumericError("j(r)/j(r+1) not finite on grid");
  return worst;
}

double jupper_constant(const SubordinatorModel& model, int d, const std::vector<double>& r_grid) {
  double worst = 0.0;
  for (double r : r_grid)
    worst = std::max(worst, levy_density_j(model, r, d) * std::pow(r, d) / eval_phi(model, 1.0 / (r * r)));
  return worst;
}

// Tail nu(x) = mu([x, inf)) tabulated on a log grid, inverted in log-log coordinates.
struct JumpTable {
  double rate = 0.0;   // nu(epsilon)
  double drift = 0.0;  // m(epsilon)
  std::vector<double> log_x;
  std::vector<double> log_tail;
  double end_slope = -1.0;  // d log nu / d log x past the table

  double invert(double tail) const {
    const double lt = std::log(tail);
    if (lt >= log_tail.front()) return std::exp(log_x.front());
    if (lt <= log_tail.back()) return std::exp(log_x.back() + (lt - log_tail.back()) / end_slope);
    // log_tail is decreasing
    const auto it = std::lower_bound(log_tail.begin(), log_tail.end(), lt, std::greater<>());
    const auto i = static_cast<std::size_t>(it - log_tail.begin());
    const double w = (lt - log_tail[i - 1]) / (log_tail[i] - log_tail[i - 1]);
    return std::exp(log_x[i - 1] + w * (log_x[i] - log_x[i - 1]));
  }
};

namespace {

double stieltjes_tail(const SubordinatorModel& model, double x) {
  // nu(x) = int m(s) e^{-x s} / s ds, s = shift + e^w
  const double shift = model.stieltjes_shift();
  QuadratureOptions opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-10;
  opts.piece_width = 2.0;
  auto f = [&](double w) {
    const double e = std::exp(w);
    return model.stieltjes_over_s_log(w) * std::exp(-x * e) * e;
  };
  const double w_hi = std::log(60.0 / x);
  return std::exp(-x * shift) * integrate_pieces(f, std::min(-200.0, w_hi - 200.0), w_hi, opts).value;
}

double stieltjes_small_jump_mean(const SubordinatorModel& model, double eps) {
  // m(eps) = int m(s) (1 - e^{-eps s}(1 + eps s)) / s^2 ds
  const double shift = model.stieltjes_shift();
  QuadratureOptions opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-10;
  opts.piece_width = 2.0;
  auto f = [&](double w) {
    const double s = shift + std::exp(w);
    return model.stieltjes_over_s_log(w) * one_minus_exp_poly(eps * s) / (1.0 + shift * std::exp(-w));
  };
  const double w_mid = std::log(60.0 / eps);
  return integrate_pieces(f, w_mid - 240.0, w_mid, opts).value + integrate(f, w_mid, kInf, opts).value;
}

std::shared_ptr<const JumpTable> build_table(const SubordinatorModel& model, double eps) {
  auto table = std::make_shared<JumpTable>();
  if (model.is_stable()) {
    const double b = model.stable_index();
    const double c = model.scale() * b / std::tgamma(1.0 - b);
    table->rate = c * std::pow(eps, -b) / b;
    table->drift = c * std::pow(eps, 1.0 - b) / (1.0 - b);
    table->end_slope = -b;
    return table;
  }
  table->rate = stieltjes_tail(model, eps);
  table->drift = stieltjes_small_jump_mean(model, eps);
  constexpr double kPerDecade = 50.0;
  const double step = std::log(10.0) / kPerDecade;
  const double floor = std::log(table->rate) - 46.0;
  for (double lx = std::log(eps);; lx += step) {
    const double tail = stieltjes_tail(model, std::exp(lx));
    if (!(tail > 0.0)) break;
    table->log_x.push_back(lx);
    table->log_tail.push_back(std::log(tail));
    if (table->log_tail.back() < floor || lx > std::log(1e16)) break;
  }
  const std::size_t k = table->log_x.size();
  if (k < 2) throw NumericError("jump table for " + model.id() + " has fewer than two points");
  table->end_slope = (table->log_tail[k - 1] - table->log_tail[k - 2]) / (table->log_x[k - 1] - table->log_x[k - 2]);
  return table;
}

std::shared_ptr<const JumpTable> cached_table(const SubordinatorModel& model, double eps) {
  static std::mutex mutex;
  static std::map<std::pair<std::string, double>, std::shared_ptr<const JumpTable>> cache;
  const auto key = std::make_pair(model.id(), eps);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto table = build_table(model, eps);
  std::lock_guard lock(mutex);
  return cache.emplace(key, table).first->second;
}

}  // namespace

SubordinatorSampler::SubordinatorSampler(SubordinatorModel model, SamplingScheme scheme, double epsilon,
                                         std::uint64_t seed, std::uint32_t stream_id)
    : model_(std::move(model)), scheme_(scheme), epsilon_(epsilon), seed_(seed), stream_id_(stream_id) {
  if (model_.drift() != 0.0) throw UnsupportedError("subordinators with drift are not supported");
  if (scheme_ == SamplingScheme::exact_stable && !model_.is_stable())
    throw UnsupportedError("exact_stable sampling requires a stable model, got " + model_.id());
  if (scheme_ == SamplingScheme::cpp_truncation) {
    if (!(epsilon_ > 0.0)) throw DomainError("small-jump cutoff epsilon must be positive");
    table_ = cached_table(model_, epsilon_);
  }
}

SubordinatorSampler SubordinatorSampler::make_default(const SubordinatorModel& model, std::uint64_t seed,
                                                      double epsilon) {
  return SubordinatorSampler(model, model.is_stable() ? SamplingScheme::exact_stable : SamplingScheme::cpp_truncation,
                             epsilon, seed);
}

SubordinatorSampler SubordinatorSampler::with_seed(std::uint64_t seed) const {
  SubordinatorSampler copy = *this;
  copy.seed_ = seed;
  return copy;
}

SubordinatorSampler SubordinatorSampler::with_stream(std::uint32_t stream_id) const {
  SubordinatorSampler copy = *this;
  copy.stream_id_ = stream_id;
  return copy;
}

double SubordinatorSampler::jump_rate() const { return table_ ? table_->rate : 0.0; }
double SubordinatorSampler::compensation_drift() const { return table_ ? table_->drift : 0.0; }

double SubordinatorSampler::draw_jump(Philox& rng) const {
  if (model_.is_stable()) return epsilon_ * std::pow(uniform_open(rng), -1.0 / model_.stable_index());
  return table_->invert(uniform_open(rng) * table_->rate);
}

double SubordinatorSampler::draw(double t, Philox& rng) const {
  if (!(t > 0.0)) throw DomainError("S_t requires t > 0");
  if (scheme_ == SamplingScheme::exact_stable) {
    const double b = model_.stable_index();
    return std::pow(t * model_.scale(), 1.0 / b) * sample_one_sided_stable(b, rng);
  }
  std::poisson_distribution<long> count(t * table_->rate);
  const long jumps = count(rng);
  double s = table_->drift * t;
  for (long k = 0; k < jumps; ++k) s += draw_jump(rng);
  return s;
}

double SubordinatorSampler::sampled_laplace_exponent(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  if (scheme_ == SamplingScheme::exact_stable) return model_.phi(lambda);
  // lambda m(eps) + int_eps^inf (1 - e^{-lambda t}) mu(t) dt, the last term as
  // int m(s) [e^{-s eps}/s - e^{-(s+lambda) eps}/(s+lambda)] ds.
  const double eps = epsilon_;
  const double shift = model_.stieltjes_shift();
  QuadratureOptions opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-10;
  opts.piece_width = 2.0;
  auto f = [&](double w) {
    const double e = std::exp(w);
    const double s = shift + e;
    const double bracket = std::exp(-s * eps) / s - std::exp(-(s + lambda) * eps) / (s + lambda);
    return model_.stieltjes_over_s_log(w) * s * bracket * e;
  };
  const double w_hi = std::log(60.0 / eps);
  const double big = integrate_pieces(f, w_hi - 240.0, w_hi, opts).value;
  return lambda * compensation_drift() + big;
}

double kanter_A(double b, double u) {
  const double num = std::sin(b * kPi * u);
  return std::pow(num / std::sin(kPi * u), 1.0 / (1.0 - b)) * std::sin((1.0 - b) * kPi * u) / num;
}

double sample_one_sided_stable(double b, Philox& rng) {
  const double u = uniform_open(rng);
  const double e = standard_exponential(rng);
  return std::pow(kanter_A(b, u) / e, (1.0 - b) / b);
}

std::vector<double> sample_S(const SubordinatorSampler& sampler, double t, std::size_t n, unsigned workers) {
  if (n == 0) throw DomainError("sample_S requires n >= 1");
  std::vector<double> out(n);
  run_chunks(n, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Philox rng = sampler.rng(i);
      out[i] = sampler.draw(t, rng);
    }
    return 0;
  });
  return out;
}

std::vector<double> sample_path_increments(const SubordinatorSampler& sampler, const std::vector<double>& t_grid,
                                           Philox& rng) {
  std::vector<double> values;
  values.reserve(t_grid.size());
  double prev_t = 0.0;
  double s = 0.0;
  for (double t : t_grid) {
    if (!(t > prev_t)) throw DomainError("time grid must be strictly increasing and start after 0");
    s += sampler.draw(t - prev_t, rng);
    values.push_back(s);
    prev_t = t;
  }
  return values;
}

std::vector<double> sample_path_increments(const SubordinatorSampler& sampler, const std::vector<double>& t_grid,
                                           std::uint64_t substream) {
  Philox rng = sampler.rng(substream);
  return sample_path_increments(sampler, t_grid, rng);
}

double concentration_probability(const SubordinatorSampler& sampler, double t, double rho, std::size_t n,
                                 unsigned workers) {
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho must lie in (0,1)");
  const SubordinatorModel& model = sampler.model();
  const double lo = 1.0 / (2.0 * invert_phi(model, 1.0 / t));
  const double hi = 1.0 / invert_phi(model, rho / t);
  const std::vector<double> s = sample_S(sampler, t, n, workers);
  const auto hits = std::count_if(s.begin(), s.end(), [&](double v) { return v >= lo && v <= hi; });
  return static_cast<double>(hits) / static_cast<double>(n);
}

}  // namespace sbm
