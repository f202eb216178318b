#pragma once

#include <string>

#include "cltlab/dist_zoo.hpp"

namespace cltlab {

/// The unspecified absolute constants of the Edgeworth / Senatov bounds.
struct BoundConstants {
  double C = 1.0;
  double c = 0.5;
  void validate() const;
};

/// sup_{b0 <= |b| <= b_max} |v(b)| with b0 = sigma^2 / (12 beta3).
struct CharSupEstimate {
  double b0 = 0.0;
  double b_max = 0.0;
  double sup_abs_v = 0.0;
  double argmax = 0.0;
  bool vacuous = false;  // sup_abs_v >= 1 - 1e-9 (lattice laws)
};

/// A bound split into its parts so callers can see which one dominates.
///
/// The characteristic-function part C n^6 (sup|v| + 1/(2n))^n / (1+|x|)^4 is
/// astronomically large at moderate n even for smooth laws; it only decays
/// once sup|v| + 1/(2n) < 1 and n is large enough to beat n^6.
struct BoundValue {
  double total = 0.0;
  double moment_term = 0.0;
  double char_term = 0.0;
  bool vacuous = false;           // inherited from CharSupEstimate
  bool char_term_decays = false;  // sup|v| + 1/(2n) < 1
  std::string flag;               // human-readable reason when not usable

  bool usable() const { return !vacuous; }
};

enum class BoundVariant { k3, fourth_moment };

inline constexpr double kVacuityTolerance = 1e-9;

/// Phi(x) + (1 - x^2) e^{-x^2/2} mu3 / (6 sqrt(2 pi n) sigma^3).
double edgeworth_cdf(const MomentSet& m, long n, double x);

CharSupEstimate charfn_sup(const UnivariateModel& model, double grid_step, double b_max);
/// Default search window [b0, b0 + 50/sigma] with step 0.01/sigma.
CharSupEstimate charfn_sup(const UnivariateModel& model);

/// n^6 (sup + 1/(2n))^n, evaluated in log space (may be +inf).
double char_factor(double sup_abs_v, long n);

/// Non-uniform bound on |P(W_n <= x) - edgeworth_cdf(x)|.
BoundValue nonuniform_bound(const UnivariateModel& model, long n, double x, const BoundConstants& k,
                            BoundVariant variant);
/// Same with a precomputed sup estimate (avoids repeating the search).
BoundValue nonuniform_bound(const UnivariateModel& model, long n, double x, const BoundConstants& k,
                            BoundVariant variant, const CharSupEstimate& sup);

}  // namespace cltlab
