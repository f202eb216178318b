#pragma once

#include <string_view>

namespace cltlab {

enum class EstimateKind { monte_carlo, quadrature, closed_form };

std::string_view to_string(EstimateKind kind);

/// A value together with how far it can be trusted.
///
/// For Monte Carlo results `err` is a standard error; for quadrature it is the
/// integrator's error bound; closed forms carry err = 0. `converged` is false
/// when a quadrature stopped at its depth limit before meeting tolerance, in
/// which case `value` is the best estimate seen.
struct Estimate {
  double value = 0.0;
  double err = 0.0;
  EstimateKind kind = EstimateKind::closed_form;
  bool converged = true;

  static Estimate closed_form(double v) { return {v, 0.0, EstimateKind::closed_form, true}; }
};

}  // namespace cltlab
