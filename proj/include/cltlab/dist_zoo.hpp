#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cltlab/rng.hpp"

namespace cltlab {

/// Moments of one mean-zero summand W_1. beta4 is empty when E|W|^4 = inf.
struct MomentSet {
  double sigma2 = 1.0;
  double mu3 = 0.0;
  double beta3 = 0.0;
  std::optional<double> beta4;

  double sigma() const;
  /// beta4 or MomentAbsentError.
  double require_beta4() const;
  /// Lyapunov ordering and |mu3| <= beta3; throws DomainError.
  void validate() const;
};

/// A scalar law for W_1. Implementations are immutable.
class UnivariateLaw {
 public:
  virtual ~UnivariateLaw() = default;

  virtual std::string name() const = 0;
  virtual MomentSet moments() const = 0;
  virtual std::complex<double> char_fn(double b) const = 0;
  virtual double draw(Generator& gen) const = 0;

  virtual bool has_density() const { return false; }
  virtual double density(double /*x*/) const { return 0.0; }
  /// Support [lo, hi] of W_1 (may be infinite).
  virtual std::pair<double, double> support() const;
  /// True when |v(b)| returns to 1 away from b = 0.
  virtual bool is_lattice() const { return false; }

  /// E[|W|^k 1{|W| >= thr}] (upper = true) or E[|W|^k 1{|W| < thr}].
  virtual double truncated_abs_moment(int k, double thr, bool upper) const;

  /// Whether draw_sum_path can emit an exactly N(0,1) partner for each sum.
  virtual bool has_coupling() const { return false; }

  /// Standardized sums (n sigma^2)^{-1/2} sum W_i for every n in the ascending
  /// list `ns`, built from one nested sequence of summands. When `z` is
  /// non-empty and has_coupling(), z[i] is an exact N(0,1) draw coupled to
  /// w[i] (same randomness, monotone transport).
  virtual void draw_sum_path(std::span<const long> ns, Generator& gen, std::span<double> w,
                             std::span<double> z) const;
};

/// Value handle around a catalog law with its moments cached.
class UnivariateModel {
 public:
  UnivariateModel() = default;
  explicit UnivariateModel(std::shared_ptr<const UnivariateLaw> law);

  const std::string& name() const { return name_; }
  const MomentSet& moments() const { return moments_; }
  std::complex<double> char_fn(double b) const { return law_->char_fn(b); }
  const UnivariateLaw& law() const { return *law_; }
  bool valid() const { return static_cast<bool>(law_); }

 private:
  std::shared_ptr<const UnivariateLaw> law_;
  std::string name_;
  MomentSet moments_;
};

UnivariateModel normal_model();
UnivariateModel exp_centered_model();
UnivariateModel uniform_sym_model();
UnivariateModel bernoulli_model(double p);
/// Student t with 4 degrees of freedom, unscaled (variance 2); E|W|^4 = inf.
UnivariateModel student_t4_model();

MomentSet moments(const UnivariateModel& model);
std::complex<double> char_fn(const UnivariateModel& model, double b);
/// One standardized sum of n summands.
double sample_sum(const UnivariateModel& model, long n, const RngStream& rng);

/// X = A xi with xi_j i.i.d. from a unit-variance coordinate law.
class MultivariateModel {
 public:
  MultivariateModel(std::string name, Eigen::MatrixXd factor, UnivariateModel coordinate);

  const std::string& name() const { return name_; }
  int dimension() const { return static_cast<int>(factor_.rows()); }
  const Eigen::MatrixXd& factor() const { return factor_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  /// Descending.
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  double trace_sigma2() const { return eigenvalues_.sum(); }
  double op_norm() const { return eigenvalues_(0); }
  /// E||X||^3 (closed form for the Gaussian, else 10^6-draw MC on a fixed stream).
  double beta3_norm() const { return beta3_norm_; }
  const UnivariateModel& coordinate() const { return coordinate_; }

  Eigen::VectorXd draw(Generator& gen) const;
  /// n^{-1/2} sum X_i at each n in `ns` (columns of w), and, if the
  /// coordinate law has a coupling, the matching N(0, Sigma) vectors in z.
  void draw_sum_path(std::span<const long> ns, Generator& gen, Eigen::MatrixXd& w, Eigen::MatrixXd* z) const;

 private:
  std::string name_;
  Eigen::MatrixXd factor_;
  UnivariateModel coordinate_;
  Eigen::MatrixXd covariance_;
  Eigen::VectorXd eigenvalues_;
  double beta3_norm_ = 0.0;
};

MultivariateModel gauss_iso_model(int d);
MultivariateModel exp_product_model(int d);
/// Uniform coordinates pushed through a lower-bidiagonal map: anisotropic,
/// correlated, log-concave.
MultivariateModel box_affine_model(int d);

/// Law of <a, X>. `a` must be a unit vector within 1e-10.
UnivariateModel project(const MultivariateModel& model, const Eigen::VectorXd& a);

/// max over directions of E<a,X>^4 / (E<a,X>^2)^2.
double l4_l2_constant(const MultivariateModel& model, std::span<const Eigen::VectorXd> directions);

/// Catalog lookup by name, e.g. "exp_centered", "bernoulli:p=0.3", "gauss_iso:d=5".
/// Throws UnknownModelError.
UnivariateModel univariate_by_name(const std::string& spec);
MultivariateModel multivariate_by_name(const std::string& spec);
bool is_multivariate_name(const std::string& spec);
/// One line per catalog entry: name pattern and a short description.
std::vector<std::pair<std::string, std::string>> catalog_listing();

}  // namespace cltlab
