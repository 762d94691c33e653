#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sbm {

enum class ModelKind { stable, log_example_i, log_example_ii };

/// Driftless Laplace exponent of a subordinator from the closed-form catalog:
///
///   stable:alpha=a          phi(l) = l^(a/2),                 a in (0,2)
///   log-example-i:beta=b    phi(l) = l / log(1 + l^(b/2)),    b in (0,2)
///   log-example-ii          phi(l) = l / log(1 + l) - 1
///
/// Appending `normalize=1` to the parameter list divides phi by phi(1).
/// All three entries are complete Bernstein functions, so the Levy density is
/// mu(t) = int_0^inf e^{-t s} m(s) ds with m(s) = Im phi(-s + i0) / pi.
class SubordinatorModel {
 public:
  static SubordinatorModel stable(double alpha, bool normalize = false);
  static SubordinatorModel log_example_i(double beta, bool normalize = false);
  static SubordinatorModel log_example_ii(bool normalize = false);

  /// Parses catalog ids such as "stable:alpha=1.2" or "log-example-i:beta=1.0,normalize=1".
  static SubordinatorModel parse(std::string_view id);

  std::string id() const;
  ModelKind kind() const { return kind_; }
  /// alpha for stable, beta for log-example-i, 0 for log-example-ii.
  double param() const { return param_; }
  bool normalized() const { return normalized_; }
  double drift() const { return 0.0; }
  /// Multiplier applied to the raw catalog formula (1/phi_raw(1) when normalized).
  double scale() const { return scale_; }
  bool is_stable() const { return kind_ == ModelKind::stable; }
  /// Index of the one-sided stable subordinator, alpha/2. Only meaningful for stable models.
  double stable_index() const { return param_ / 2.0; }

  double phi(double lambda) const;
  double phi_prime(double lambda) const;
  /// phi(l) - l phi'(l), evaluated in a cancellation-free form.
  double H(double lambda) const;
  /// H(e^v) / e^v, finite for every real v (no overflow at large v).
  double H_over_lambda_log(double v) const;

  /// Levy density of the subordinator. Closed form for stable, one quadrature otherwise.
  double mu(double t) const;
  /// Density of the Stieltjes measure: Im phi(-s + i0) / pi.
  double stieltjes_density(double s) const;
  /// Left end of the support of the Stieltjes density (1 for log-example-ii, else 0).
  double stieltjes_shift() const { return kind_ == ModelKind::log_example_ii ? 1.0 : 0.0; }
  /// m(s)/s at s = stieltjes_shift() + e^w, overflow-free for large w.
  double stieltjes_over_s_log(double w) const;

 private:
  SubordinatorModel(ModelKind kind, double param, bool normalize);
  double raw_phi(double lambda) const;

  ModelKind kind_;
  double param_;
  bool normalized_;
  double scale_ = 1.0;
};

double eval_phi(const SubordinatorModel& model, double lambda);
double eval_phi_prime(const SubordinatorModel& model, double lambda);
double eval_H(const SubordinatorModel& model, double lambda);
/// Phi(r) = 1 / phi(r^-2).
double eval_Phi(const SubordinatorModel& model, double r);
/// psi(r) = 1 / H(r^-2).
double eval_psi(const SubordinatorModel& model, double r);

inline constexpr double kInversionRtol = 1e-10;

/// Monotone inverse of phi by geometric bracket expansion and bisection in log-space.
double invert_phi(const SubordinatorModel& model, double y);
/// Phi^-1(s) = phi^-1(1/s)^(-1/2).
double invert_Phi(const SubordinatorModel& model, double s);

enum class ScalingTarget { phi, H };

std::string_view to_string(ScalingTarget target);

/// Empirical witnesses for the weak scaling conditions
///   C_L t^gamma <= f(l t)/f(l) <= C_U t^delta    for l > a, t >= 1.
struct ScalingCertificate {
  ScalingTarget target = ScalingTarget::phi;
  double a = 0.0;
  double gamma_hat = 0.0;
  double C_L_hat = 1.0;
  double delta_hat = 0.0;
  double C_U_hat = 1.0;
  std::vector<std::pair<double, double>> grid;

  /// Re-evaluates the witness inequalities on every grid pair.
  bool holds(const SubordinatorModel& model) const;
};

inline constexpr double kScalingSlack = 1e-9;

ScalingCertificate estimate_scaling(const SubordinatorModel& model, ScalingTarget target, double a,
                                    const std::vector<double>& lambda_grid,
                                    const std::vector<double>& t_grid);

/// int_0^r s / psi(s) ds, computed as (1/2) int_{-2 log r}^inf H(e^v) e^{-v} dv.
double integral_s_over_psi(const SubordinatorModel& model, double r);

/// |Phi(r) - r^2 / (2 int_0^r s/psi(s) ds)| / Phi(r).
double check_identity_Phi_psi(const SubordinatorModel& model, double r);

struct RenewalBounds {
  double lower;
  double upper;
};

/// (Phi(r)^{1/2} / c, c Phi(r)^{1/2}).
RenewalBounds renewal_envelope(const SubordinatorModel& model, double r, double c = 1.0);

}  // namespace sbm
