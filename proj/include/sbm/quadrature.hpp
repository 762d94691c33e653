#pragma once

#include <functional>

namespace sbm {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  unsigned max_depth = 18;
  /// Width of the pieces used by integrate_pieces / integrate_log.
  double piece_width = 1.0;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (21-point) on [a, b]; b may be +inf.
/// Throws NumericError when the error estimate exceeds max(abs_tol, rel_tol*|value|).
QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureOptions& opts = {});

/// Finite [a, b] cut into pieces of width opts.piece_width, each integrated
/// as the seed of one global adaptive pass; convergence is checked on the sum.
QuadratureResult integrate_pieces(const Integrand& f, double a, double b,
                                  const QuadratureOptions& opts = {});

/// Integral of f over [a, b], 0 < a < b < inf, after the substitution s = e^u.
/// The u-range is cut into pieces so that narrow peaks are never skipped by
/// the first Kronrod pass.
QuadratureResult integrate_log(const Integrand& f, double a, double b,
                               const QuadratureOptions& opts = {});

}  // namespace sbm
