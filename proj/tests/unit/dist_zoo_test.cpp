#include <gtest/gtest.h>

#include <cmath>

#include "cltlab/dist_zoo.hpp"
#include "cltlab/errors.hpp"
#include "cltlab/parallel.hpp"
#include "cltlab/special_functions.hpp"

using namespace cltlab;

// Reference moments: mpmath quadrature of |x|^k against each density.
TEST(Moments, Catalog) {
  const MomentSet e = exp_centered_model().moments();
  EXPECT_NEAR(e.sigma2, 1.0, 1e-15);
  EXPECT_NEAR(e.mu3, 2.0, 1e-15);
  EXPECT_NEAR(e.beta3, 2.41455329405730785914628524194, 1e-12);
  EXPECT_NEAR(*e.beta4, 9.0, 1e-12);

  const MomentSet u = uniform_sym_model().moments();
  EXPECT_NEAR(u.sigma2, 1.0, 1e-15);
  EXPECT_NEAR(u.mu3, 0.0, 1e-15);
  EXPECT_NEAR(u.beta3, 1.29903810567665797, 1e-12);
  EXPECT_NEAR(*u.beta4, 1.8, 1e-12);

  const MomentSet z = normal_model().moments();
  EXPECT_NEAR(z.beta3, 1.59576912160573071, 1e-12);
  EXPECT_NEAR(*z.beta4, 3.0, 1e-12);

  const MomentSet b = bernoulli_model(0.5).moments();
  EXPECT_NEAR(b.sigma2, 0.25, 1e-15);
  EXPECT_NEAR(b.beta3, 0.125, 1e-15);
  EXPECT_NEAR(*b.beta4, 0.0625, 1e-15);

  const MomentSet t = student_t4_model().moments();
  EXPECT_NEAR(t.sigma2, 2.0, 1e-12);
  EXPECT_FALSE(t.beta4.has_value());
  EXPECT_THROW(t.require_beta4(), MomentAbsentError);
}

TEST(Moments, ValidateRejectsInconsistentSets) {
  MomentSet m;
  m.sigma2 = 1.0;
  m.beta3 = 0.5;  // violates Lyapunov beta3 >= sigma^3
  EXPECT_THROW(m.validate(), DomainError);
}

TEST(CharFn, ClosedForms) {
  // |v(b)| = (1 + b^2)^{-1/2} for Exp(1) - 1
  EXPECT_NEAR(std::abs(exp_centered_model().char_fn(2.0)), 1.0 / std::sqrt(5.0), 1e-14);
  EXPECT_NEAR(normal_model().char_fn(1.5).real(), std::exp(-1.125), 1e-15);
  // sin(sqrt3 b)/(sqrt3 b)
  EXPECT_NEAR(uniform_sym_model().char_fn(0.7).real(), std::sin(std::sqrt(3.0) * 0.7) / (std::sqrt(3.0) * 0.7), 1e-15);
  // lattice: |v(2 pi)| = 1
  EXPECT_NEAR(std::abs(bernoulli_model(0.5).char_fn(2 * kPi)), 1.0, 1e-12);
  EXPECT_TRUE(bernoulli_model(0.3).law().is_lattice());
  // t4: 2 b^2 K_2(2|b|) (mpmath besselk; cross-checked by cosine quadrature of the density)
  EXPECT_NEAR(student_t4_model().char_fn(0.9).real(), 0.565130448436665889, 1e-12);
}

TEST(Sampling, DrawMomentsMatch) {
  for (const auto& m : {exp_centered_model(), uniform_sym_model(), bernoulli_model(0.3)}) {
    Generator g(RngStream{21, 0});
    RunningStats s;
    for (int i = 0; i < 200000; ++i) s.push(m.law().draw(g));
    EXPECT_NEAR(s.mean, 0.0, 4 * s.standard_error()) << m.name();
    EXPECT_NEAR(s.variance(), m.moments().sigma2, 0.02 * m.moments().sigma2) << m.name();
  }
}

TEST(Sampling, CoupledPathIsExactGaussian) {
  const UnivariateModel m = exp_centered_model();
  ASSERT_TRUE(m.law().has_coupling());
  Generator g(RngStream{5, 0});
  const long ns[2] = {10, 1000};
  double w[2], z[2];
  RunningStats zs, diff;
  for (int i = 0; i < 50000; ++i) {
    m.law().draw_sum_path(ns, g, w, z);
    zs.push(z[0]);
    diff.push(std::abs(w[1] - z[1]));
  }
  EXPECT_NEAR(zs.mean, 0.0, 4 * zs.standard_error());
  EXPECT_NEAR(zs.variance(), 1.0, 0.02);
  // transport coupling: W_n and Z agree to O(n^{-1/2})
  EXPECT_LT(diff.mean, 0.1);
}

TEST(Sampling, TruncatedMoments) {
  const auto& law = exp_centered_model().law();
  const double up = law.truncated_abs_moment(3, 1.0, true);
  const double lo = law.truncated_abs_moment(3, 1.0, false);
  EXPECT_NEAR(up + lo, exp_centered_model().moments().beta3, 1e-8);
  // mpmath: int_2^inf (x-1)^3 e^{-x} dx = 16/e^2
  EXPECT_NEAR(up, 16.0 / std::exp(2.0), 1e-8);
}

TEST(Multivariate, FactorAndSpectrum) {
  const MultivariateModel m = exp_product_model(5);
  EXPECT_EQ(m.dimension(), 5);
  EXPECT_NEAR(m.trace_sigma2(), 5.0, 1e-12);
  EXPECT_NEAR(m.op_norm(), 1.0, 1e-12);
  const MultivariateModel box = box_affine_model(6);
  EXPECT_TRUE((box.covariance() - box.factor() * box.factor().transpose()).norm() < 1e-12);
  for (int i = 1; i < 6; ++i) EXPECT_GE(box.eigenvalues()(i - 1), box.eigenvalues()(i));
  // E||Z||^3 for the standard Gaussian in R^3: 8 sqrt(2/pi)
  EXPECT_NEAR(gauss_iso_model(3).beta3_norm(), 8.0 * std::sqrt(2.0 / kPi), 1e-10);
}

TEST(Multivariate, ProjectionCumulants) {
  const MultivariateModel m = exp_product_model(3);
  Eigen::VectorXd a(3);
  a << 1, 1, 1;
  a /= std::sqrt(3.0);
  const MomentSet p = project(m, a).moments();
  EXPECT_NEAR(p.sigma2, 1.0, 1e-12);
  // third cumulant adds: 3 * 2 / 3^{3/2}
  EXPECT_NEAR(p.mu3, 2.0 / std::sqrt(3.0), 1e-12);
  // fourth moment: kappa4 sum a^4 + 3 = 6/3 + 3
  EXPECT_NEAR(*p.beta4, 5.0, 1e-12);
  EXPECT_THROW(project(m, Eigen::VectorXd::Ones(3)), DomainError);
}

TEST(Multivariate, L4L2Constant) {
  const MultivariateModel m = exp_product_model(4);
  std::vector<Eigen::VectorXd> dirs = {Eigen::VectorXd::Unit(4, 0)};
  EXPECT_NEAR(l4_l2_constant(m, dirs), 9.0, 1e-12);
  dirs = {Eigen::VectorXd::Constant(4, 0.5)};
  EXPECT_NEAR(l4_l2_constant(m, dirs), 3.0 + 6.0 / 4.0, 1e-12);
  EXPECT_NEAR(l4_l2_constant(gauss_iso_model(4), dirs), 3.0, 1e-12);
}

TEST(Catalog, LookupAndErrors) {
  EXPECT_EQ(univariate_by_name("exp_centered").name(), "exp_centered");
  EXPECT_NEAR(univariate_by_name("bernoulli:p=0.3").moments().sigma2, 0.21, 1e-15);
  EXPECT_EQ(multivariate_by_name("exp_product:d=7").dimension(), 7);
  EXPECT_TRUE(is_multivariate_name("gauss_iso:d=2"));
  EXPECT_FALSE(is_multivariate_name("normal"));
  EXPECT_THROW(univariate_by_name("cauchy"), UnknownModelError);
  EXPECT_THROW(univariate_by_name("normal:d=3"), UnknownModelError);
  EXPECT_THROW(multivariate_by_name("exp_product"), UnknownModelError);
  EXPECT_THROW(bernoulli_model(1.5), DomainError);
  EXPECT_GE(catalog_listing().size(), 8u);
}
