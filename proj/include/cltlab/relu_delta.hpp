#pragma once

#include <span>
#include <vector>

#include "cltlab/edgeworth.hpp"
#include "cltlab/estimate.hpp"
#include "cltlab/mc_oracle.hpp"

namespace cltlab {

/// E[(Z - t)_+] = phi(t) - t (1 - Phi(t)).
double gauss_relu_mean(double t);

/// int_0^inf (1 + |t + s|)^{-4} ds in closed form.
double kappa(double t);

/// First-order prediction of Delta_ReLU(t) = E(W_n - t)_+ - E(Z - t)_+:
/// +t phi(t) mu3 / (6 sqrt(n) sigma^3). Integrating the Edgeworth CDF
/// correction over [t, inf) fixes the sign; see README.
double edgeworth_relu_prediction(const MomentSet& m, long n, double t);
/// The opposite-signed variant, kept for diagnostics only.
double edgeworth_relu_prediction_negated(const MomentSet& m, long n, double t);

/// Delta_ReLU(t) by MC. Uses the exact Gaussian coupling when the law has
/// one, else the closed form gauss_relu_mean(t).
DeltaEstimate delta_relu_mc(const UnivariateModel& model, long n, double t, long reps, const RngStream& rng);

/// Delta_ReLU over the grid ns x ts with one shared sample pool; result is
/// n-major: out[i * ts.size() + j] is (ns[i], ts[j]).
std::vector<DeltaEstimate> delta_relu_sweep(const UnivariateModel& model, std::span<const long> ns,
                                            std::span<const double> ts, long reps, const RngStream& rng);

/// C [beta4/(sigma^4 n) + n^6 (sup|v| + 1/(2n))^n] kappa(t).
BoundValue relu_pointwise_bound(const UnivariateModel& model, long n, double t, const BoundConstants& k);
BoundValue relu_pointwise_bound(const UnivariateModel& model, long n, double t, const BoundConstants& k,
                                const CharSupEstimate& sup);

struct ReluDeltaReport {
  long n = 0;
  double t = 0.0;
  DeltaEstimate mc;
  double prediction = 0.0;
  BoundValue bound;
  double kappa_t = 0.0;
};

std::vector<ReluDeltaReport> relu_delta_reports(const UnivariateModel& model, std::span<const long> ns,
                                                std::span<const double> ts, long reps, const RngStream& rng,
                                                const BoundConstants& k);

struct Zeta2Bound {
  double prediction = 0.0;  // of int_0^inf Delta_ReLU(t) dt: +mu3 / (6 sqrt(2 pi n) sigma^3)
  BoundValue bound;         // (C/6)[beta4/(sigma^4 n) + n^6 (...)^n]
};

Zeta2Bound zeta2_bound(const UnivariateModel& model, long n, const BoundConstants& k);
Zeta2Bound zeta2_bound(const UnivariateModel& model, long n, const BoundConstants& k, const CharSupEstimate& sup);
/// The opposite-signed prediction, diagnostics only.
double zeta2_prediction_negated(const MomentSet& m, long n);

struct Zeta2Estimate {
  long n = 0;
  double value = 0.0;               // trapezoid-in-t MC of int_0^inf Delta_ReLU
  double se = 0.0;                  // MC standard error
  double discretization_err = 0.0;  // |T_h - T_2h| / 3
  double combined_err() const;      // se + discretization_err
};

/// Per-sample trapezoid on [0, t_max] with step h of (w - t)_+, plus the
/// exact tail (w - t_max)_+^2 / 2.
double trapezoid_relu_integral(double w, double h, double t_max);

std::vector<Zeta2Estimate> zeta2_mc(const UnivariateModel& model, std::span<const long> ns, long reps,
                                    const RngStream& rng, double t_max = 8.0, double step = 0.05);

struct AppendixE {
  Estimate hermite_tail;      // int_0^inf (1 - (t+s)^2) phi(t+s) ds, closed form -t phi(t)
  Estimate kappa_quadrature;  // int_0^inf (1 + |t+s|)^{-4} ds, closed form kappa(t)
};

AppendixE appendix_e_integrals(double t);

/// E|W_n| - E|Z| through |x| = (x)_+ + (-x)_+, one estimate per n (CRN).
std::vector<DeltaEstimate> abs_moment_gap_mc(const UnivariateModel& model, std::span<const long> ns, long reps,
                                             const RngStream& rng);
/// 2 C [beta4/(sigma^4 n) + n^6 (...)^n] kappa(0).
BoundValue abs_moment_gap_bound(const UnivariateModel& model, long n, const BoundConstants& k);

}  // namespace cltlab
