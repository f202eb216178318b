#include <gtest/gtest.h>

#include <boost/math/special_functions/beta.hpp>
#include <cmath>

#include "cltlab/errors.hpp"
#include "cltlab/norm_moments.hpp"
#include "cltlab/relu_delta.hpp"
#include "cltlab/special_functions.hpp"

using namespace cltlab;

TEST(Cd, ClosedFormsAndBetaOracle) {
  EXPECT_NEAR(c_d(2), kPi, 1e-10);
  EXPECT_NEAR(c_d(3), 4.0, 1e-10);
  EXPECT_EQ(c_d(1), 2.0);
  // (d - 1) B(1/2, (d - 1)/2)
  for (int d : {5, 10, 50, 100}) EXPECT_NEAR(c_d(d), (d - 1) * boost::math::beta(0.5, 0.5 * (d - 1)), 1e-9 * d) << d;
  EXPECT_NEAR(c_d(5), 16.0 / 3.0, 1e-10);
  EXPECT_THROW(c_d(0), DomainError);
}

TEST(Cd, GrowsLikeSqrtD) {
  for (int d = 2; d <= 100; ++d) {
    const double r = c_d(d) / std::sqrt(static_cast<double>(d));
    EXPECT_GE(r, 2.0) << d;
    EXPECT_LE(r, 4.0) << d;
  }
  // the limit of c_d / sqrt(d) is sqrt(2 pi)
  EXPECT_NEAR(c_d(100) / 10.0, std::sqrt(2 * kPi), 0.01);
}

TEST(Cd, SphereSamplingCrossCheck) {
  for (int d : {2, 3, 10, 50}) {
    const Estimate e = positive_part_mean_mc(d, 200000, RngStream{13, static_cast<std::uint64_t>(d)});
    EXPECT_NEAR(c_d(d) * e.value, 1.0, 3 * c_d(d) * e.err) << d;
  }
}

TEST(NormViaRidge, ExactCasesAndRates) {
  SphereRidgeSpec spec;
  spec.d = 3;
  spec.n_directions = 1000000;
  const Estimate e = norm_via_ridge(Eigen::VectorXd::Unit(3, 0), spec);
  EXPECT_NEAR(e.value, 1.0, 3 * e.err);
  EXPECT_EQ(norm_via_ridge(Eigen::VectorXd::Zero(3), spec).value, 0.0);
  Eigen::VectorXd x(3);
  x << 0.3, -1.2, 0.5;
  spec.n_directions = 10000;
  EXPECT_NEAR(norm_via_ridge(2 * x, spec).value, 2 * norm_via_ridge(x, spec).value, 1e-12);
  // se ratio between 1e4 and 4e4 directions
  const double se1 = norm_via_ridge(x, spec).err;
  spec.n_directions = 40000;
  const double se4 = norm_via_ridge(x, spec).err;
  EXPECT_NEAR(se1 / se4, 2.0, 0.6);
  EXPECT_THROW(norm_via_ridge(Eigen::VectorXd::Zero(2), spec), DomainError);
  spec.n_directions = 0;
  EXPECT_THROW(spec.validate(), DomainError);
}

TEST(NormGap, GaussianZeroAndOneDimensionalConsistency) {
  const DeltaEstimate g = expected_norm_gap(gauss_iso_model(4), 50, 20000, RngStream{2, 0});
  EXPECT_NEAR(g.delta, 0.0, 1e-12);
  // d = 1: the norm gap is the |x| moment gap
  const MultivariateModel one("exp_product:d=1", Eigen::MatrixXd::Identity(1, 1), exp_centered_model());
  const DeltaEstimate n1 = expected_norm_gap(one, 50, 200000, RngStream{3, 0});
  const long ns[1] = {50};
  const auto a = abs_moment_gap_mc(exp_centered_model(), ns, 200000, RngStream{4, 0});
  EXPECT_NEAR(n1.delta, a[0].delta, 3 * (n1.se + a[0].se));
  EXPECT_NEAR(n1.delta, -0.00132868234451, 4 * n1.se);
}

TEST(NormGap, BoundAssembly) {
  const MultivariateModel m = exp_product_model(5);
  const auto dirs = bound_directions(5, 4, RngStream{1, 0});
  EXPECT_EQ(dirs.size(), 9u);
  const NormGapBound b = expected_norm_gap_bound(m, 200, {}, dirs);
  EXPECT_NEAR(b.l4_l2, 9.0, 1e-12);
  EXPECT_NEAR(b.moment_term, 2.0 * kappa(0.0) * c_d(5) * 1.0 * 9.0 / 200.0, 1e-12);
  EXPECT_FALSE(b.vacuous);
  EXPECT_GT(b.char_term, 0.0);
}
