#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "cltlab/dist_zoo.hpp"
#include "cltlab/edgeworth.hpp"
#include "cltlab/estimate.hpp"
#include "cltlab/quadrature.hpp"

namespace cltlab {

/// weight * exp(-sum_j (x_j - mu_j)^2 / (2 ell_j^2)).
struct GaussianBump {
  double weight = 1.0;
  Eigen::VectorXd mu;
  Eigen::VectorXd ell;
};

/// A finite signed mixture of Gaussian bumps with its exact Fourier data, in
/// the convention f(x) = int e^{i<w,x>} fhat(w) dw.
class FourierFunction {
 public:
  FourierFunction(std::string name, std::vector<GaussianBump> bumps);

  const std::string& name() const { return name_; }
  int dimension() const { return d_; }
  const std::vector<GaussianBump>& bumps() const { return bumps_; }

  double operator()(const Eigen::VectorXd& x) const;
  std::complex<double> fourier(const Eigen::VectorXd& w) const;
  double fourier_magnitude(const Eigen::VectorXd& w) const { return std::abs(fourier(w)); }
  /// b(w) in (-pi, pi] with fhat = |fhat| e^{ib}.
  double phase(const Eigen::VectorXd& w) const;
  double f0() const;
  Eigen::VectorXd grad0() const;

  /// Importance proposal: the mixture sum_k |weight_k| |fhat_k| / sum_k |weight_k|,
  /// which dominates |fhat| up to the factor proposal_mass().
  Eigen::VectorXd sample_omega(Generator& gen) const;
  double proposal_density(const Eigen::VectorXd& w) const;
  double proposal_mass() const;

  /// Convolution with N(0, h^2 I): each bump widens to sqrt(ell^2 + h^2).
  FourierFunction convolved(double h) const;
  /// Signed linear combination of two functions on the same space.
  FourierFunction combined(double a, const FourierFunction& other, double b) const;

 private:
  std::string name_;
  int d_ = 0;
  std::vector<GaussianBump> bumps_;
};

/// exp(-||x||^2 / 2) in d dimensions.
FourierFunction gaussian_test_function(int d);
/// A shifted, anisotropic bump, so the Fourier phase is not identically 0.
FourierFunction shifted_test_function(int d);

/// Options for omega integrals when d > 3 (and for the bound, always).
struct OmegaSampling {
  long samples = 1 << 16;
  RngStream rng{0x0DDBA11ULL, 0};
};

/// -int_0^inf [(z-u)_+ e^{iu} + (-z-u)_+ e^{-iu}] du by quadrature on [0, |z|].
std::complex<double> relu_complex_identity(double z, const QuadratureSpec& spec);

/// int min{2|<w,x>|, <w,x>^2/2} |fhat(w)| dw. converged = finiteness verdict.
/// A divergent integral throws HypothesisError.
Estimate barron_condition(const FourierFunction& fm, const Eigen::VectorXd& x, const QuadratureSpec& spec,
                          const OmegaSampling& mc = {});

/// f(0) + <grad f(0), x> - int |fhat| sum_{eps=+-1} int_0^inf (eps<w,x> - u)_+ cos(u + eps b) du dw.
double reconstruct_ridge(const FourierFunction& fm, const Eigen::VectorXd& x, const QuadratureSpec& spec,
                         const OmegaSampling& mc = {});

struct ActivationModel {
  std::string name;
  std::function<double(double)> h;
  /// hhat(a) = (1/2pi) int h(t) e^{-iat} dt.
  std::function<std::complex<double>(double)> h_fourier;
  double a = 1.0;
  double c_h = 0.0;  // arg hhat(a)
  /// Half-width of the window outside which h is treated as 0.
  double reach = 40.0;
};

/// h(t) = e^{-t^2/2}; hhat(a) = e^{-a^2/2}/sqrt(2pi), c_h = 0.
ActivationModel gaussian_bump_activation(double a = 1.0);

/// h(t) = sigmoid(t + alpha) - sigmoid(t - alpha), hhat by quadrature. Keeps
/// probe_a when |hhat(probe_a)| > 1e-8, else scans a in (0, 20].
ActivationModel funahashi_window(const std::function<double(double)>& sigmoid, double alpha, double probe_a);

/// (2pi|hhat(a)|)^{-1} int int h(<w,x>/a + u) |fhat(w)| cos(au + c_h - b(w)) du dw.
double reconstruct_activation(const FourierFunction& fm, const ActivationModel& act, const Eigen::VectorXd& x,
                              const QuadratureSpec& spec, const OmegaSampling& mc = {});

/// t -> bound on |Delta_ReLU(t)| for one projected law.
struct ReluProfile {
  std::function<double(double)> bound;
  bool vacuous = false;
  std::string flag;
};
using ReluBoundFactory = std::function<ReluProfile(const UnivariateModel&, long n)>;

/// |prediction(t)| + pointwise bound; the characteristic-function part can
/// be left out (it is astronomically large at desk-scale n).
ReluBoundFactory edgeworth_relu_profile(const BoundConstants& k, bool include_char_term);

struct RidgeBound {
  double value = 0.0;
  double se = 0.0;  // IS standard error over omega
  long directions = 0;
  bool vacuous = false;
  std::vector<Eigen::VectorXd> vacuous_directions;
};

/// sum_eps int |fhat(w)| s^2 int_0^inf profile_{eps a}(t) dt dw, with
/// a = w/||w||, s = ||w|| sigma_a, omega importance-sampled.
RidgeBound delta_bound_ridge(const FourierFunction& fm, const ReluBoundFactory& univariate_delta,
                             const MultivariateModel& model, long n, const QuadratureSpec& spec,
                             const OmegaSampling& mc = {.samples = 64});

}  // namespace cltlab
