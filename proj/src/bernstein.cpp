#include "sbm/bernstein.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "sbm/errors.hpp"
#include "sbm/quadrature.hpp"

namespace sbm {
namespace {

constexpr double kPi = std::numbers::pi;

// Taylor coefficients of l / log(1 + l) around 0 (Gregory coefficients).
constexpr std::array<double, 9> kGregory = {
    1.0,          1.0 / 2.0,          -1.0 / 12.0,    1.0 / 24.0,         -19.0 / 720.0,
    3.0 / 160.0,  -863.0 / 60480.0,   275.0 / 24192.0, -33953.0 / 3628800.0};

constexpr double kSeriesCutoff = 1e-2;

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }
double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || std::isnan(x)) {
    std::ostringstream os;
    os << what << " must be positive, got " << x;
    throw DomainError(os.str());
  }
}

// Key/value list "alpha=1.2,normalize=1".
struct ParamList {
  std::vector<std::pair<std::string, std::string>> items;

  std::optional<std::string> get(std::string_view key) const {
    for (const auto& [k, v] : items)
      if (k == key) return v;
    return std::nullopt;
  }
};

ParamList parse_params(std::string_view text) {
  ParamList out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ConfigError("model parameter without '=': " + std::string(item));
    out.items.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
  }
  return out;
}

double to_double(const std::string& s, std::string_view key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("model parameter " + std::string(key) + " is not a number: " + s);
  }
}

}  // namespace

SubordinatorModel::SubordinatorModel(ModelKind kind, double param, bool normalize)
    : kind_(kind), param_(param), normalized_(normalize) {
  if (normalize) scale_ = 1.0 / raw_phi(1.0);
}

SubordinatorModel SubordinatorModel::stable(double alpha, bool normalize) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("stable model requires alpha in (0,2)");
  return SubordinatorModel(ModelKind::stable, alpha, normalize);
}

SubordinatorModel SubordinatorModel::log_example_i(double beta, bool normalize) {
  if (!(beta > 0.0 && beta < 2.0)) throw DomainError("log-example-i requires beta in (0,2)");
  return SubordinatorModel(ModelKind::log_example_i, beta, normalize);
}

SubordinatorModel SubordinatorModel::log_example_ii(bool normalize) {
  return SubordinatorModel(ModelKind::log_example_ii, 0.0, normalize);
}

SubordinatorModel SubordinatorModel::parse(std::string_view id) {
  const auto colon = id.find(':');
  const std::string_view name = id.substr(0, colon);
  const ParamList params =
      parse_params(colon == std::string_view::npos ? std::string_view{} : id.substr(colon + 1));
  bool normalize = false;
  if (auto n = params.get("normalize")) normalize = to_double(*n, "normalize") != 0.0;
  for (const auto& [k, v] : params.items) {
    const bool known = k == "normalize" || (name == "stable" && k == "alpha") ||
                       (name == "log-example-i" && k == "beta");
    if (!known) throw ConfigError("unknown parameter '" + k + "' for model " + std::string(name));
  }
  if (name == "stable") {
    auto a = params.get("alpha");
    if (!a) throw ConfigError("stable model requires alpha");
    return stable(to_double(*a, "alpha"), normalize);
  }
  if (name == "log-example-i") {
    auto b = params.get("beta");
    if (!b) throw ConfigError("log-example-i requires beta");
    return log_example_i(to_double(*b, "beta"), normalize);
  }
  if (name == "log-example-ii") return log_example_ii(normalize);
  throw ConfigError("unknown model id: " + std::string(id));
}

std::string SubordinatorModel::id() const {
  std::ostringstream os;
  os.precision(12);
  switch (kind_) {
    case ModelKind::stable: os << "stable:alpha=" << param_; break;
    case ModelKind::log_example_i: os << "log-example-i:beta=" << param_; break;
    case ModelKind::log_example_ii: os << "log-example-ii"; break;
  }
  if (normalized_) os << (kind_ == ModelKind::log_example_ii ? ":" : ",") << "normalize=1";
  return os.str();
}

double SubordinatorModel::raw_phi(double lambda) const {
  switch (kind_) {
    case ModelKind::stable:
      return std::pow(lambda, param_ / 2.0);
    case ModelKind::log_example_i:
      return lambda / std::log1p(std::pow(lambda, param_ / 2.0));
    case ModelKind::log_example_ii: {
      if (lambda < kSeriesCutoff) {
        double acc = 0.0;
        for (std::size_t k = kGregory.size() - 1; k >= 1; --k) acc = (acc + kGregory[k]) * lambda;
        return acc;
      }
      return lambda / std::log1p(lambda) - 1.0;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double SubordinatorModel::phi(double lambda) const { return scale_ * raw_phi(lambda); }

double SubordinatorModel::phi_prime(double lambda) const {
  double d = 0.0;
  switch (kind_) {
    case ModelKind::stable: {
      const double b = param_ / 2.0;
      d = b * std::pow(lambda, b - 1.0);
      break;
    }
    case ModelKind::log_example_i: {
      const double h = param_ / 2.0;
      const double z = std::pow(lambda, h);
      const double L = std::log1p(z);
      d = 1.0 / L - h * z / ((1.0 + z) * L * L);
      break;
    }
    case ModelKind::log_example_ii: {
      if (lambda < kSeriesCutoff) {
        double acc = 0.0;
        for (std::size_t k = kGregory.size() - 1; k >= 1; --k)
          acc = acc * lambda + static_cast<double>(k) * kGregory[k];
        d = acc;
      } else {
        const double L = std::log1p(lambda);
        d = 1.0 / L - lambda / ((1.0 + lambda) * L * L);
      }
      break;
    }
  }
  return scale_ * d;
}

double SubordinatorModel::H(double lambda) const {
  double h = 0.0;
  switch (kind_) {
    case ModelKind::stable: {
      const double b = param_ / 2.0;
      h = (1.0 - b) * std::pow(lambda, b);
      break;
    }
    case ModelKind::log_example_i: {
      const double hb = param_ / 2.0;
      const double z = std::pow(lambda, hb);
      const double L = std::log1p(z);
      h = lambda * hb * z / ((1.0 + z) * L * L);
      break;
    }
    case ModelKind::log_example_ii: {
      if (lambda < kSeriesCutoff) {
        double acc = 0.0;
        for (std::size_t k = kGregory.size() - 1; k >= 2; --k)
          acc = (acc + (1.0 - static_cast<double>(k)) * kGregory[k]) * lambda;
        h = acc * lambda;
      } else {
        const double L = std::log1p(lambda);
        h = lambda * lambda / ((1.0 + lambda) * L * L) - 1.0;
      }
      break;
    }
  }
  return scale_ * h;
}

double SubordinatorModel::H_over_lambda_log(double v) const {
  double q = 0.0;
  switch (kind_) {
    case ModelKind::stable: {
      const double b = param_ / 2.0;
      q = (1.0 - b) * std::exp((b - 1.0) * v);
      break;
    }
    case ModelKind::log_example_i: {
      const double hb = param_ / 2.0;
      const double L = softplus(hb * v);
      q = hb * logistic(hb * v) / (L * L);
      break;
    }
    case ModelKind::log_example_ii: {
      const double lambda = std::exp(v);
      if (lambda < kSeriesCutoff) {
        q = H(lambda) / (scale_ * lambda);
      } else {
        const double L = softplus(v);
        q = logistic(v) / (L * L) - std::exp(-v);
      }
      break;
    }
  }
  return scale_ * q;
}

double SubordinatorModel::stieltjes_density(double s) const {
  if (!(s > 0.0)) return 0.0;
  double m = 0.0;
  switch (kind_) {
    case ModelKind::stable: {
      const double b = param_ / 2.0;
      m = std::sin(kPi * b) / kPi * std::pow(s, b);
      break;
    }
    case ModelKind::log_example_i: {
      const double hb = param_ / 2.0;
      m = s * stieltjes_over_s_log(std::log(s)) / scale_;
      break;
    }
    case ModelKind::log_example_ii: {
      if (s <= 1.0) return 0.0;
      const double L = std::log(s - 1.0);
      m = s / (L * L + kPi * kPi);
      break;
    }
  }
  return scale_ * m;
}

double SubordinatorModel::stieltjes_over_s_log(double w) const {
  double q = 0.0;
  switch (kind_) {
    case ModelKind::stable: {
      const double b = param_ / 2.0;
      q = std::sin(kPi * b) / kPi * std::exp((b - 1.0) * w);
      break;
    }
    case ModelKind::log_example_i: {
      const double hb = param_ / 2.0;
      const double logmod = hb * w;
      std::complex<double> lw;
      if (logmod > 40.0) {
        // log(1 + z) = log z + log1p(1/z), |1/z| < e^-40
        lw = std::complex<double>(logmod, kPi * hb);
      } else {
        // complex log1p, accurate when |z| is tiny
        const std::complex<double> z = std::polar(std::exp(logmod), kPi * hb);
        lw = std::complex<double>(0.5 * std::log1p(2.0 * z.real() + std::norm(z)),
                                  std::atan2(z.imag(), 1.0 + z.real()));
      }
      q = lw.imag() / (kPi * std::norm(lw));
      break;
    }
    case ModelKind::log_example_ii:
      // s - 1 = e^w, so log(s - 1) = w.
      q = 1.0 / (w * w + kPi * kPi);
      break;
  }
  return scale_ * q;
}

double SubordinatorModel::mu(double t) const {
  require_positive(t, "mu argument");
  if (kind_ == ModelKind::stable) {
    const double b = param_ / 2.0;
    return scale_ * b / std::tgamma(1.0 - b) * std::pow(t, -1.0 - b);
  }
  // mu(t) = int m(s) e^{-t s} ds with s = shift + e^w.
  const double shift = stieltjes_shift();
  if (t * shift > 700.0) return 0.0;
  QuadratureOptions opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-10;
  auto f = [this, t, shift](double w) {
    const double e = std::exp(w);
    const double s = shift + e;
    return stieltjes_over_s_log(w) * s * std::exp(-t * e) * e;
  };
  const double w_hi = std::log(60.0 / t);
  return std::exp(-t * shift) * integrate_pieces(f, -200.0 + std::min(0.0, w_hi), w_hi, opts).value;
}

double eval_phi(const SubordinatorModel& model, double lambda) {
  require_positive(lambda, "lambda");
  return model.phi(lambda);
}

double eval_phi_prime(const SubordinatorModel& model, double lambda) {
  require_positive(lambda, "lambda");
  return model.phi_prime(lambda);
}

double eval_H(const SubordinatorModel& model, double lambda) {
  require_positive(lambda, "lambda");
  const double h = model.H(lambda);
  if (h < -1e-12) {
    std::ostringstream os;
    os << "H(" << lambda << ") = " << h << " < 0: phi' inconsistent with phi for " << model.id();
    throw ModelError(os.str());
  }
  return std::max(h, 0.0);
}

double eval_Phi(const SubordinatorModel& model, double r) {
  require_positive(r, "r");
  const double lambda = 1.0 / (r * r);
  if (!std::isfinite(lambda) || lambda == 0.0) throw RangeError("Phi: r^-2 not representable");
  const double out = 1.0 / model.phi(lambda);
  if (!std::isfinite(out) || out == 0.0) throw RangeError("Phi: value out of double range");
  return out;
}

double eval_psi(const SubordinatorModel& model, double r) {
  require_positive(r, "r");
  const double lambda = 1.0 / (r * r);
  if (!std::isfinite(lambda) || lambda == 0.0) throw RangeError("psi: r^-2 not representable");
  const double out = 1.0 / eval_H(model, lambda);
  if (!std::isfinite(out) || out == 0.0) throw RangeError("psi: value out of double range");
  return out;
}

double invert_phi(const SubordinatorModel& model, double y) {
  require_positive(y, "phi^-1 argument");
  if (!std::isfinite(y)) throw RangeError("phi^-1 of infinity");
  double lo = 1e-12;
  double hi = 1e12;
  while (model.phi(lo) > y) {
    lo *= 1e-6;
    if (lo < 1e-300) throw RangeError("phi^-1: target below phi range");
  }
  while (model.phi(hi) < y) {
    hi *= 1e6;
    if (hi > 1e300) throw RangeError("phi^-1: target above phi range");
  }
  double llo = std::log(lo);
  double lhi = std::log(hi);
  for (int it = 0; it < 200 && lhi - llo > 1e-15 * std::max(1.0, std::abs(llo)); ++it) {
    const double mid = 0.5 * (llo + lhi);
    if (model.phi(std::exp(mid)) < y)
      llo = mid;
    else
      lhi = mid;
  }
  const double x = std::exp(0.5 * (llo + lhi));
  if (std::abs(model.phi(x) - y) > kInversionRtol * y) {
    std::ostringstream os;
    os << "phi^-1(" << y << ") residual above tolerance";
    throw RangeError(os.str());
  }
  return x;
}

double invert_Phi(const SubordinatorModel& model, double s) {
  require_positive(s, "Phi^-1 argument");
  return 1.0 / std::sqrt(invert_phi(model, 1.0 / s));
}

std::string_view to_string(ScalingTarget target) { return target == ScalingTarget::phi ? "phi" : "H"; }

namespace {
double scaling_fn(const SubordinatorModel& model, ScalingTarget target, double lambda) {
  return target == ScalingTarget::phi ? eval_phi(model, lambda) : eval_H(model, lambda);
}
}  // namespace

bool ScalingCertificate::holds(const SubordinatorModel& model) const {
  for (const auto& [lambda, t] : grid) {
    if (!(lambda > a) || t < 1.0) continue;
    const double q = scaling_fn(model, target, lambda * t) / scaling_fn(model, target, lambda);
    if (q < C_L_hat * std::pow(t, gamma_hat) || q > C_U_hat * std::pow(t, delta_hat)) return false;
  }
  return true;
}

ScalingCertificate estimate_scaling(const SubordinatorModel& model, ScalingTarget target, double a,
                                    const std::vector<double>& lambda_grid,
                                    const std::vector<double>& t_grid) {
  if (a < 0.0) throw DomainError("scaling cutoff a must be >= 0");
  ScalingCertificate cert;
  cert.target = target;
  cert.a = a;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double lambda : lambda_grid) {
    if (!(lambda > a)) throw DomainError("scaling grid lambda must exceed the cutoff a");
    const double base = scaling_fn(model, target, lambda);
    for (double t : t_grid) {
      if (t < 1.0) throw DomainError("scaling grid t must be >= 1");
      cert.grid.emplace_back(lambda, t);
      const double moved = scaling_fn(model, target, lambda * t);
      if (moved < base * (1.0 - 1e-12)) {
        std::ostringstream os;
        os << to_string(target) << " is not monotone on the grid at lambda=" << lambda << ", t=" << t;
        throw ModelError(os.str());
      }
      if (t == 1.0) continue;
      const double e = std::log(moved / base) / std::log(t);
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
  }
  if (!std::isfinite(lo)) throw DomainError("scaling grid needs at least one t > 1");
  cert.gamma_hat = lo - kScalingSlack * std::abs(lo);
  cert.delta_hat = hi + kScalingSlack * std::abs(hi);
  return cert;
}

double integral_s_over_psi(const SubordinatorModel& model, double r) {
  require_positive(r, "r");
  QuadratureOptions opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-12;
  const double v0 = -2.0 * std::log(r);
  auto f = [&model](double v) { return model.H_over_lambda_log(v); };
  return 0.5 * integrate(f, v0, std::numeric_limits<double>::infinity(), opts).value;
}

double check_identity_Phi_psi(const SubordinatorModel& model, double r) {
  const double big_phi = eval_Phi(model, r);
  const double rhs = r * r / (2.0 * integral_s_over_psi(model, r));
  return std::abs(big_phi - rhs) / big_phi;
}

RenewalBounds renewal_envelope(const SubordinatorModel& model, double r, double c) {
  if (!(c >= 1.0)) throw DomainError("renewal comparability constant must be >= 1");
  const double root = std::sqrt(eval_Phi(model, r));
  return {root / c, c * root};
}

}  // namespace sbm
