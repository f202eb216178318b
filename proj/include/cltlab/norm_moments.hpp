#pragma once

#include <Eigen/Dense>
#include <span>

#include "cltlab/dist_zoo.hpp"
#include "cltlab/edgeworth.hpp"
#include "cltlab/estimate.hpp"
#include "cltlab/mc_oracle.hpp"
#include "cltlab/rng.hpp"

namespace cltlab {

/// 1 / E(w_1)_+ for w uniform on S^{d-1}, by quadrature over the marginal of
/// w_1. c_1 = 2.
double c_d(int d);
/// Sphere-sampling cross-check of 1 / c_d.
Estimate positive_part_mean_mc(int d, long directions, const RngStream& rng);

struct SphereRidgeSpec {
  int d = 2;
  long n_directions = 100000;
  RngStream rng{0x5F3E5EULL, 0};
  void validate() const;
};

/// c_d * mean over sampled directions of (<a, x>)_+.
Estimate norm_via_ridge(const Eigen::VectorXd& x, const SphereRidgeSpec& spec);

/// E|W_n| - E|Z'| with Z' = A zeta sharing the model's factor.
DeltaEstimate expected_norm_gap(const MultivariateModel& model, long n, long reps, const RngStream& rng);
std::vector<DeltaEstimate> expected_norm_gap_path(const MultivariateModel& model, std::span<const long> ns, long reps,
                                                  const RngStream& rng);

struct NormGapBound {
  double total = 0.0;
  double moment_term = 0.0;  // 2 C kappa(0) c_d |Sigma|^{1/2} L / n
  double char_term = 0.0;    // same prefactor times n^6 (sup + 1/(2n))^n, worst sampled direction
  double l4_l2 = 0.0;
  double worst_sup = 0.0;
  bool vacuous = false;
};

/// Directions: unit vectors used both for L and for the worst char-function sup.
NormGapBound expected_norm_gap_bound(const MultivariateModel& model, long n, const BoundConstants& k,
                                     std::span<const Eigen::VectorXd> directions);
/// Coordinate axes plus `extra` random directions.
std::vector<Eigen::VectorXd> bound_directions(int d, int extra, const RngStream& rng);

}  // namespace cltlab
