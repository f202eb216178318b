#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <span>
#include <vector>

#include "cltlab/dist_zoo.hpp"
#include "cltlab/edgeworth.hpp"
#include "cltlab/quadrature.hpp"
#include "cltlab/ridge_repr.hpp"

namespace cltlab {

using VectorFunction = std::function<double(const Eigen::VectorXd&)>;

enum class KernelKind { gaussian, gaussian_twiced };

struct MollifierSpec {
  double h = 1.0;
  KernelKind kernel = KernelKind::gaussian;
  void validate() const;
};

/// f_h(x) = E f(x + h V), V ~ N(0, I); the twiced kernel is 2 f_h - f_{sqrt2 h}.
/// Generic f by nested quadrature (d <= 3).
double mollify_gauss(const VectorFunction& f, int d, const MollifierSpec& spec, const Eigen::VectorXd& x,
                     const QuadratureSpec& q);
/// Exact for Gaussian mixtures.
FourierFunction mollify_gauss(const FourierFunction& f, const MollifierSpec& spec);

/// max over the probe grid of |f_h(x) - f(x)|: a lower estimate of the sup norm.
double sup_approx_error(const FourierFunction& f, const MollifierSpec& spec, std::span<const Eigen::VectorXd> probes);
double sup_approx_error(const VectorFunction& f, int d, const MollifierSpec& spec,
                        std::span<const Eigen::VectorXd> probes, const QuadratureSpec& q);

struct BallBoundInputs {
  double beta3_norm = 0.0;    // E||X||^3
  double sigma2_trace = 0.0;  // E||X||^2
  std::array<double, 6> top_eigs{};
  long n = 1;
  BoundConstants constants;

  /// Refuses models with fewer than six positive eigenvalues.
  static BallBoundInputs from_model(const MultivariateModel& model, long n, const BoundConstants& k);
  void validate() const;
  double sigma_product() const;  // sigma_1 ... sigma_6
};

/// C beta3 n^{-1/2} / (1 + r^3/sigma^3) {rho^3/(s1..s6) e^{-c r^2/sigma^2} + 1/sigma^3
/// + (s1..s6)^{-1/2} e^{-c r^2/sigma^2}}, rho = radius, r = |radius - center_dist|.
double senatov_ball_delta(const BallBoundInputs& inputs, double radius, double center_dist);

struct HolderIntegrals {
  double i1_bound = 0.0;  // C_B h^{3/2} exp(-|y|^2/(16h))
  double i2_exact = 0.0;  // exp(-|y|^2/(8h))
  double i3_bound = 0.0;  // (2h)^{3/2} Gamma(5/2)
};

/// C_B = (3/2)^{5/2} e^{1/e} 2^3.
double holder_constant();
HolderIntegrals holder_t_integrals(double norm_y, double h);

/// The same three t-integrals by adaptive quadrature on [0, 1].
struct HolderQuadrature {
  Estimate weighted_inside;   // int (2h log 1/t)^{3/2} 1{|y| < sqrt(8h log 1/t)} dt
  Estimate indicator_inside;  // int 1{|y| < sqrt(8h log 1/t)} dt
  Estimate weighted_outside;  // int (2h log 1/t)^{3/2} 1{|y| >= sqrt(8h log 1/t)} dt
};
HolderQuadrature holder_t_quadrature(double norm_y, double h, const QuadratureSpec& q);

struct NormballSampling {
  long samples = 1 << 18;
  RngStream rng{0xBA11ULL, 0};
  /// IS proposal N(0, tau^2 I) for s = y h (f assumed to live on unit scale).
  double proposal_scale = 1.5;
};

/// (C beta3 / (n^{1/2} (2pi)^{d/2})) [h^{3/2}/(s1..s6) + 1/sigma^3 + (s1..s6)^{-1/2}]
///   * int [8 sigma^3/(8 sigma^3 + h^3 |y|^3) + e^{-|y|^2/16}] |f(y h)| dy.
/// The y-integral by importance sampling. Returns the value and IS se.
Estimate normball_delta_bound(const VectorFunction& f, const MultivariateModel& model, double h, long n,
                              const BoundConstants& k, const NormballSampling& mc = {});
/// Same for radial f(y) = profile(|y|): the y-integral reduces to one radial
/// quadrature. Divergence throws DomainError ("f not admissible").
Estimate normball_delta_bound_radial(const std::function<double(double)>& profile, const MultivariateModel& model,
                                     double h, long n, const BoundConstants& k, const QuadratureSpec& q);

struct BandwidthChoice {
  double h_star = 0.0;
  double total = 0.0;
  std::vector<double> totals;  // per grid point (inf when inadmissible)
};

/// argmin_h 2 sup|f_h - f| + normball_delta_bound over the grid; ties go to
/// the smaller h.
BandwidthChoice optimize_bandwidth(const FourierFunction& f, const MultivariateModel& model, long n,
                                   std::span<const double> h_grid, const BoundConstants& k,
                                   std::span<const Eigen::VectorXd> probes, const NormballSampling& mc = {});

}  // namespace cltlab
