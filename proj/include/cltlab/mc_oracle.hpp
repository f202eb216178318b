#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cltlab/dist_zoo.hpp"
#include "cltlab/parallel.hpp"

namespace cltlab {

using RealFunction = std::function<double(double)>;

/// Signed MC estimate of E f(W_n) - E f(Z).
///
/// se >= 0: it is exactly 0 when the law is Gaussian and the comparator is
/// coupled (both sides see the same draw).
struct DeltaEstimate {
  double delta = 0.0;
  double abs_delta = 0.0;
  double se = 0.0;
  long replications = 0;
};

/// One atom of a finite signed measure: weight mu({lambda}) and a bound on
/// Delta_{f_lambda}.
struct SignedAtom {
  double weight = 0.0;
  double bound = 0.0;
};

/// How the Gaussian partner of each replication is produced.
enum class GaussianSide {
  none,         // caller uses a closed form
  coupled,      // the law's exact transport coupling
  independent,  // a fresh N(0,1) draw per replication, shared across n
};

/// Minimum replications accepted by the estimators.
inline constexpr long kMinReps = 100;

/// Generic driver. For each replication draws the nested standardized sums
/// w[i] at ns[i] (and z[i] per `side`) and lets `per_rep` write `outputs`
/// numbers; returns their running statistics. Chunked and deterministic.
std::vector<RunningStats> mc_path_statistics(
    const UnivariateLaw& law, std::span<const long> ns, long reps, const RngStream& rng, GaussianSide side,
    std::size_t outputs,
    const std::function<void(std::span<const double> w, std::span<const double> z, std::span<double> out)>& per_rep);

/// Delta_f by MC. With `gaussian_mean` the Gaussian side is exact; otherwise
/// it is the coupled partner when the law has one, else an independent draw.
DeltaEstimate estimate_delta_f(const UnivariateModel& model, const RealFunction& f, long n, long reps,
                               const RngStream& rng, std::optional<double> gaussian_mean = std::nullopt);

/// Same for several n at once with common random numbers (nested sums).
std::vector<DeltaEstimate> estimate_delta_f_path(const UnivariateModel& model, const RealFunction& f,
                                                 std::span<const long> ns, long reps, const RngStream& rng,
                                                 std::optional<double> gaussian_mean = std::nullopt);

struct LevelSetPoint {
  double t = 0.0;
  double diff = 0.0;  // P(g(W_n) >= t) - P(g(Z) >= t)
  double se = 0.0;
};

struct LevelSetResult {
  std::vector<LevelSetPoint> points;
  /// Trapezoid sum of diff over the grid, with its own per-replication se.
  double trapezoid = 0.0;
  double trapezoid_se = 0.0;
};

/// Level-set differences for a monotone g on a sorted t grid. Every t sees
/// the same samples; the Gaussian side is 1 - Phi(g^{-1}(t)) (or Phi(.) for
/// decreasing g).
LevelSetResult estimate_delta_levelset(const UnivariateModel& model, const RealFunction& g, long n,
                                       std::span<const double> t_grid, long reps, const RngStream& rng);
/// Half-space version: the law of <a, W_n> is that of the projected model.
LevelSetResult estimate_delta_levelset(const MultivariateModel& model, const Eigen::VectorXd& a,
                                       const RealFunction& g, long n, std::span<const double> t_grid, long reps,
                                       const RngStream& rng);

using VectorFunction = std::function<double(const Eigen::VectorXd&)>;

/// Delta_f for W_n = n^{-1/2} sum X_i in R^d against Z' ~ N(0, Sigma), one
/// estimate per n (nested sums). Z' = A zeta shares the model's factor A;
/// zeta is the coordinatewise exact coupling when the coordinate law has
/// one, else an independent standard normal vector.
std::vector<DeltaEstimate> estimate_delta_f_path(const MultivariateModel& model, const VectorFunction& f,
                                                 std::span<const long> ns, long reps, const RngStream& rng);

struct EcdfPoint {
  long n = 0;
  double x = 0.0;
  double ecdf = 0.0;  // P(W_n <= x)
  double se = 0.0;
};

/// Empirical CDF of the standardized sum on the grid ns x xs (n-major), one
/// shared pool of nested sums.
std::vector<EcdfPoint> ecdf_path(const UnivariateModel& model, std::span<const long> ns, std::span<const double> xs,
                                 long reps, const RngStream& rng);

/// Trapezoid rule over (t, diff) points.
double levelset_trapezoid(std::span<const LevelSetPoint> points);

/// sum |weight| * bound.
double aggregate_signed_measure(std::span<const SignedAtom> atoms);

}  // namespace cltlab
