#include "cltlab/norm_moments.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>

#include "cltlab/errors.hpp"
#include "cltlab/parallel.hpp"
#include "cltlab/quadrature.hpp"
#include "cltlab/relu_delta.hpp"
#include "cltlab/special_functions.hpp"
#include "cltlab/sphere.hpp"

namespace cltlab {

double c_d(int d) {
  if (d < 1) throw DomainError("c_d: d must be >= 1");
  if (d == 1) return 2.0;
  // w_1 = cos(theta) has density proportional to sin^{d-2}(theta) on [0, pi];
  // E(w_1)_+ = int_0^{pi/2} cos sin^{d-2} / B(1/2, (d-1)/2).
  const double half = 0.5 * (d - 1);
  const Estimate num = integrate_1d(
      [d](double th) { return std::cos(th) * std::pow(std::sin(th), d - 2); }, 0.0, 0.5 * kPi, QuadratureSpec{1e-14, 1e-14});
  return boost::math::beta(0.5, half) / num.value;
}

Estimate positive_part_mean_mc(int d, long directions, const RngStream& rng) {
  if (directions < 2) throw DomainError("positive_part_mean_mc: need >= 2 directions");
  const Eigen::MatrixXd a = sphere_sample(d, directions, rng);
  RunningStats st;
  for (long j = 0; j < directions; ++j) st.push(std::max(a(0, j), 0.0));
  return {st.mean, st.standard_error(), EstimateKind::monte_carlo, true};
}

void SphereRidgeSpec::validate() const {
  if (d < 2) throw DomainError("SphereRidgeSpec: d must be >= 2");
  if (n_directions < 1) throw DomainError("SphereRidgeSpec: n_directions must be >= 1");
}

Estimate norm_via_ridge(const Eigen::VectorXd& x, const SphereRidgeSpec& spec) {
  spec.validate();
  if (x.size() != spec.d) throw DomainError("norm_via_ridge: x has wrong dimension");
  if (!x.allFinite()) throw DomainError("norm_via_ridge: x must be finite");
  const double c = c_d(spec.d);
  const Eigen::MatrixXd a = sphere_sample(spec.d, spec.n_directions, spec.rng);
  const Eigen::VectorXd proj = a.transpose() * x;
  RunningStats st;
  for (Eigen::Index j = 0; j < proj.size(); ++j) st.push(std::max(proj(j), 0.0));
  const double se = spec.n_directions > 1 ? st.standard_error() : 0.0;
  return {c * st.mean, c * se, EstimateKind::monte_carlo, true};
}

std::vector<DeltaEstimate> expected_norm_gap_path(const MultivariateModel& model, std::span<const long> ns, long reps,
                                                  const RngStream& rng) {
  const VectorFunction norm = [](const Eigen::VectorXd& v) { return v.norm(); };
  return estimate_delta_f_path(model, norm, ns, reps, rng);
}

DeltaEstimate expected_norm_gap(const MultivariateModel& model, long n, long reps, const RngStream& rng) {
  const long ns[1] = {n};
  return expected_norm_gap_path(model, ns, reps, rng).front();
}

std::vector<Eigen::VectorXd> bound_directions(int d, int extra, const RngStream& rng) {
  std::vector<Eigen::VectorXd> out;
  for (int j = 0; j < d; ++j) out.push_back(Eigen::VectorXd::Unit(d, j));
  if (extra > 0) {
    const Eigen::MatrixXd a = sphere_sample(d, extra, rng);
    for (int j = 0; j < extra; ++j) out.emplace_back(a.col(j));
  }
  return out;
}

NormGapBound expected_norm_gap_bound(const MultivariateModel& model, long n, const BoundConstants& k,
                                     std::span<const Eigen::VectorXd> directions) {
  k.validate();
  if (n < 1) throw DomainError("expected_norm_gap_bound: n must be >= 1");
  if (directions.empty()) throw DomainError("expected_norm_gap_bound: no directions");
  NormGapBound out;
  out.l4_l2 = l4_l2_constant(model, directions);
  for (const auto& a : directions) {
    const CharSupEstimate sup = charfn_sup(project(model, a));
    out.vacuous = out.vacuous || sup.vacuous;
    out.worst_sup = std::max(out.worst_sup, sup.sup_abs_v);
  }
  const double pre = 2.0 * k.C * kappa(0.0) * c_d(model.dimension()) * std::sqrt(model.op_norm());
  out.moment_term = pre * out.l4_l2 / static_cast<double>(n);
  out.char_term = pre * char_factor(out.worst_sup, n);
  out.total = out.moment_term + out.char_term;
  return out;
}

}  // namespace cltlab
