#pragma once

#include <functional>
#include <span>

#include "cltlab/estimate.hpp"

namespace cltlab {

/// Tolerances for the adaptive integrators.
struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  int max_depth = 50;
  /// Radius used when an infinite domain is truncated instead of mapped.
  double truncation_radius = 40.0;

  /// Throws DomainError if any field violates its invariant.
  void validate() const;
  /// Same spec with both tolerances multiplied by `factor`.
  QuadratureSpec scaled(double factor) const;
};

using ScalarFunction = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) integration over [a, b].
///
/// Intervals are bisected worst-error-first until the summed error meets
/// max(abs_tol, rel_tol * |value|) or every remaining interval sits at
/// max_depth. In the latter case the result has converged = false and carries
/// the best (smallest error) estimate seen. A NaN from `f` throws
/// NumericalError.
Estimate integrate_1d(const ScalarFunction& f, double a, double b, const QuadratureSpec& spec);

/// Integral over [a, inf).
///
/// Maps s = a + t/(1-t) onto (0, 1) first. If that does not converge, falls
/// back to partial integrals over [a, a + R 2^k] with R = truncation_radius
/// and folds a geometric tail estimate into err. Partial integrals that stop
/// shrinking raise DivergenceError.
Estimate integrate_semi_infinite(const ScalarFunction& f, double a, const QuadratureSpec& spec);

/// Integral over the whole real line, split at `center`.
Estimate integrate_real_line(const ScalarFunction& f, const QuadratureSpec& spec, double center = 0.0);

/// Integral of a function of `d` variables over R^d by nested real-line
/// quadrature. Inner integrals run at a tenth of the outer tolerance.
/// Intended for d <= 3.
Estimate integrate_nd(const std::function<double(std::span<const double>)>& f, int d,
                      const QuadratureSpec& spec);

}  // namespace cltlab
