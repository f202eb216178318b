#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "cltlab/errors.hpp"
#include "cltlab/mc_oracle.hpp"
#include "cltlab/special_functions.hpp"

using namespace cltlab;

namespace {

double clip3(double x) { return std::clamp(x, -3.0, 3.0); }

std::vector<double> grid(double a, double b, int m) {
  std::vector<double> g;
  for (int i = 0; i <= m; ++i) g.push_back(a + (b - a) * i / m);
  return g;
}

}  // namespace

TEST(DeltaF, GaussianCoupledIsExactlyZero) {
  const auto d = estimate_delta_f(normal_model(), [](double x) { return std::abs(x); }, 50, 20000, RngStream{1, 0});
  EXPECT_EQ(d.delta, 0.0);
  EXPECT_EQ(d.se, 0.0);
  EXPECT_EQ(d.replications, 20000);
}

TEST(DeltaF, ClosedFormGaussianSide) {
  // E W_n^2 = 1 exactly, so Delta for x^2 against E Z^2 = 1 is zero within se
  const auto d = estimate_delta_f(uniform_sym_model(), [](double x) { return x * x; }, 30, 100000, RngStream{2, 0}, 1.0);
  EXPECT_NEAR(d.delta, 0.0, 4 * d.se);
  EXPECT_GT(d.se, 0.0);
}

TEST(DeltaF, PathMatchesSingleN) {
  const long ns[3] = {10, 40, 160};
  const auto f = [](double x) { return std::max(x - 1.0, 0.0); };
  const auto path = estimate_delta_f_path(exp_centered_model(), f, ns, 50000, RngStream{3, 0});
  ASSERT_EQ(path.size(), 3u);
  for (const auto& p : path) EXPECT_GE(p.se, 0.0);
  // mpmath: Delta_ReLU(1) at n = 10 for Exp(1) - 1 is 0.0226884
  EXPECT_NEAR(path[0].delta, 0.0226884, 4 * path[0].se);
}

TEST(DeltaF, ErrorsAndNaN) {
  EXPECT_THROW(estimate_delta_f(normal_model(), [](double x) { return x; }, 5, 10, RngStream{}), DomainError);
  try {
    estimate_delta_f(exp_centered_model(), [](double x) { return x > 2 ? std::nan("") : x; }, 5, 1000, RngStream{});
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("sample"), std::string::npos);
  }
}

TEST(LevelSet, TrapezoidMatchesDirectDeltaForClippedIdentity) {
  const UnivariateModel m = exp_centered_model();
  const auto t = grid(-3.0, 3.0, 600);
  const LevelSetResult ls = estimate_delta_levelset(m, clip3, 20, t, 200000, RngStream{4, 0});
  const auto direct = estimate_delta_f(m, clip3, 20, 200000, RngStream{4, 0});
  EXPECT_NEAR(ls.trapezoid, levelset_trapezoid(ls.points), 1e-12);
  EXPECT_NEAR(ls.trapezoid, direct.delta, 3 * (ls.trapezoid_se + direct.se) + 1e-4);
}

TEST(LevelSet, Validation) {
  const std::vector<double> unsorted = {1.0, 0.0};
  EXPECT_THROW(estimate_delta_levelset(normal_model(), clip3, 5, unsorted, 1000, RngStream{}), DomainError);
}

TEST(SignedMeasure, Aggregation) {
  const std::vector<SignedAtom> atoms = {{0.5, 0.2}, {-2.0, 0.1}, {0.0, 5.0}};
  EXPECT_NEAR(aggregate_signed_measure(atoms), 0.5 * 0.2 + 2.0 * 0.1, 1e-15);
  EXPECT_EQ(aggregate_signed_measure({}), 0.0);
  const std::vector<SignedAtom> bad = {{1.0, -0.1}};
  EXPECT_THROW(aggregate_signed_measure(bad), DomainError);
  // sign flips of the weights do not change the aggregate
  const std::vector<SignedAtom> flipped = {{-0.5, 0.2}, {2.0, 0.1}};
  EXPECT_NEAR(aggregate_signed_measure(flipped), aggregate_signed_measure(atoms), 1e-15);
}

TEST(Ecdf, MatchesExactGammaLaw) {
  const long ns[2] = {50, 200};
  const std::vector<double> xs = {-1.0, 0.0, 1.0};
  const auto pts = ecdf_path(exp_centered_model(), ns, xs, 200000, RngStream{6, 0});
  ASSERT_EQ(pts.size(), 6u);
  // mpmath gammainc(n, 0, n + x sqrt(n), regularized=True)
  const double exact[6] = {0.157758042815, 0.518808315472, 0.842077882774,
                           0.15844291029, 0.509403418007, 0.841536754014};
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(pts[i].ecdf, exact[i], 4 * pts[i].se);
}

TEST(Multivariate, GaussianNormGapIsZero) {
  const long ns[2] = {10, 40};
  const auto d = estimate_delta_f_path(gauss_iso_model(3), [](const Eigen::VectorXd& v) { return v.norm(); }, ns, 20000,
                                       RngStream{7, 0});
  for (const auto& x : d) EXPECT_NEAR(x.delta, 0.0, 1e-12);
}

TEST(Determinism, ThreadCountDoesNotChangeEstimates) {
  const auto f = [](double x) { return std::max(x, 0.0); };
  setenv("CLTLAB_THREADS", "1", 1);
  const auto a = estimate_delta_f(exp_centered_model(), f, 30, 60000, RngStream{8, 0});
  setenv("CLTLAB_THREADS", "3", 1);
  const auto b = estimate_delta_f(exp_centered_model(), f, 30, 60000, RngStream{8, 0});
  unsetenv("CLTLAB_THREADS");
  EXPECT_EQ(a.delta, b.delta);
  EXPECT_EQ(a.se, b.se);
}
