#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "cltlab/errors.hpp"
#include "cltlab/ridge_repr.hpp"
#include "cltlab/special_functions.hpp"

using namespace cltlab;

namespace {
Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double c : v) x(i++) = c;
  return x;
}
}  // namespace

TEST(FourierFunction, InversionByQuadrature) {
  // f(x) = int e^{iwx} fhat(w) dw, checked at one point by direct quadrature
  const FourierFunction f = shifted_test_function(1);
  const double x = 0.7;
  const double re = integrate_real_line([&](double w) { return (std::exp(std::complex<double>(0, w * x)) * f.fourier(vec({w}))).real(); }, {1e-12, 1e-12}, 0.0).value;
  EXPECT_NEAR(re, f(vec({x})), 1e-10);
  EXPECT_NEAR(gaussian_test_function(2)(vec({1.0, 1.0})), std::exp(-1.0), 1e-15);
}

TEST(FourierFunction, ConvolutionWidensBumps) {
  const FourierFunction f = gaussian_test_function(3);
  const FourierFunction g = f.convolved(0.5);
  // (1 + h^2)^{-d/2} exp(-|x|^2 / (2 (1 + h^2)))
  const Eigen::VectorXd x = vec({0.3, -0.4, 1.0});
  EXPECT_NEAR(g(x), std::pow(1.25, -1.5) * std::exp(-x.squaredNorm() / 2.5), 1e-14);
  const FourierFunction c = f.combined(2.0, g, -1.0);
  EXPECT_NEAR(c(x), 2 * f(x) - g(x), 1e-14);
}

TEST(ReluComplexIdentity, HoldsOnGrid) {
  for (int i = 0; i <= 80; ++i) {
    const double z = -20.0 + 0.5 * i;
    const std::complex<double> lhs = relu_complex_identity(z, {1e-12, 1e-12});
    const std::complex<double> rhs = std::exp(std::complex<double>(0, z)) - std::complex<double>(0, z) - 1.0;
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-9) << z;
    EXPECT_LE(std::abs(rhs), std::min(2 * std::abs(z), 0.5 * z * z) + 1e-12) << z;
  }
}

TEST(BarronCondition, FiniteForGaussianMixtures) {
  const FourierFunction f = gaussian_test_function(1);
  const Estimate e = barron_condition(f, vec({1.0}), {1e-10, 1e-10});
  EXPECT_TRUE(e.converged);
  EXPECT_GT(e.value, 0.0);
  EXPECT_EQ(barron_condition(f, vec({0.0}), {}).value, 0.0);
  EXPECT_THROW(barron_condition(f, vec({1.0, 2.0}), {}), DomainError);
}

TEST(ReconstructRidge, OneAndTwoDimensions) {
  const FourierFunction f1 = gaussian_test_function(1);
  for (double x : {-3.0, -1.0, 0.0, 1.0, 2.5})
    EXPECT_NEAR(reconstruct_ridge(f1, vec({x}), {1e-10, 1e-10}), std::exp(-0.5 * x * x), 1e-6) << x;
  EXPECT_NEAR(reconstruct_ridge(f1, vec({1.0}), {1e-10, 1e-10}), 0.606530659712633, 1e-8);
  const FourierFunction f2 = shifted_test_function(2);
  for (const auto& x : {vec({0.5, -1.0}), vec({-2.0, 1.5}), vec({0.0, 0.0})})
    EXPECT_NEAR(reconstruct_ridge(f2, x, {1e-10, 1e-10}), f2(x), 1e-6);
}

TEST(ReconstructActivation, GaussianBumpAndFunahashiWindow) {
  const FourierFunction f = shifted_test_function(1);
  const ActivationModel bump = gaussian_bump_activation(1.0);
  EXPECT_NEAR(std::abs(bump.h_fourier(1.0)), std::exp(-0.5) / std::sqrt(2 * kPi), 1e-14);
  for (double x : {-2.0, 0.4, 1.5}) EXPECT_NEAR(reconstruct_activation(f, bump, vec({x}), {1e-10, 1e-10}), f(vec({x})), 1e-6);

  const auto logistic = [](double t) { return 1.0 / (1.0 + std::exp(-t)); };
  const ActivationModel win = funahashi_window(logistic, 2.0, 1.0);
  EXPECT_GT(std::abs(win.h_fourier(win.a)), 1e-8);
  EXPECT_NEAR(win.h(0.0), logistic(2.0) - logistic(-2.0), 1e-15);
  EXPECT_NEAR(reconstruct_activation(f, win, vec({0.4}), {1e-9, 1e-9}), f(vec({0.4})), 1e-5);
}

TEST(RidgeBound, VacuityAndScaling) {
  const FourierFunction f = gaussian_test_function(2);
  const MultivariateModel m = exp_product_model(2);
  const auto prof = edgeworth_relu_profile({}, false);
  const RidgeBound b100 = delta_bound_ridge(f, prof, m, 100, {1e-9, 1e-9});
  const RidgeBound b400 = delta_bound_ridge(f, prof, m, 400, {1e-9, 1e-9});
  EXPECT_GT(b100.value, 0.0);
  EXPECT_FALSE(b100.vacuous);
  // prediction ~ n^{-1/2}, moment term ~ n^{-1}: the ratio sits between 2 and 4
  EXPECT_GT(b100.value / b400.value, 1.9);
  EXPECT_LT(b100.value / b400.value, 4.1);
  EXPECT_THROW(delta_bound_ridge(gaussian_test_function(3), prof, m, 100, {}), DomainError);
}
