#include "cltlab/normball.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

#include "cltlab/errors.hpp"
#include "cltlab/parallel.hpp"
#include "cltlab/special_functions.hpp"

namespace cltlab {

void MollifierSpec::validate() const {
  if (!(h > 0.0)) throw DomainError("MollifierSpec: h must be > 0");
}

namespace {

double gauss_smooth(const VectorFunction& f, int d, double h, const Eigen::VectorXd& x, const QuadratureSpec& q) {
  if (d > 3) throw DomainError("mollify_gauss: nested quadrature supports d <= 3 only");
  if (x.size() != d) throw DomainError("mollify_gauss: x has wrong dimension");
  Eigen::VectorXd y(d);
  const auto integrand = [&](std::span<const double> v) {
    double dens = 1.0;
    for (int j = 0; j < d; ++j) {
      y(j) = x(j) + h * v[static_cast<std::size_t>(j)];
      dens *= gauss_pdf(v[static_cast<std::size_t>(j)]);
    }
    return dens == 0.0 ? 0.0 : dens * f(y);
  };
  return integrate_nd(integrand, d, q).value;
}

}  // namespace

double mollify_gauss(const VectorFunction& f, int d, const MollifierSpec& spec, const Eigen::VectorXd& x,
                     const QuadratureSpec& q) {
  spec.validate();
  const double g = gauss_smooth(f, d, spec.h, x, q);
  if (spec.kernel == KernelKind::gaussian) return g;
  return 2.0 * g - gauss_smooth(f, d, std::sqrt(2.0) * spec.h, x, q);
}

FourierFunction mollify_gauss(const FourierFunction& f, const MollifierSpec& spec) {
  spec.validate();
  const FourierFunction g = f.convolved(spec.h);
  if (spec.kernel == KernelKind::gaussian) return g;
  return g.combined(2.0, f.convolved(std::sqrt(2.0) * spec.h), -1.0);
}

double sup_approx_error(const FourierFunction& f, const MollifierSpec& spec, std::span<const Eigen::VectorXd> probes) {
  if (probes.empty()) throw DomainError("sup_approx_error: empty probe grid");
  const FourierFunction fh = mollify_gauss(f, spec);
  double worst = 0.0;
  for (const auto& x : probes) worst = std::max(worst, std::abs(fh(x) - f(x)));
  return worst;
}

double sup_approx_error(const VectorFunction& f, int d, const MollifierSpec& spec,
                        std::span<const Eigen::VectorXd> probes, const QuadratureSpec& q) {
  if (probes.empty()) throw DomainError("sup_approx_error: empty probe grid");
  double worst = 0.0;
  for (const auto& x : probes) worst = std::max(worst, std::abs(mollify_gauss(f, d, spec, x, q) - f(x)));
  return worst;
}

BallBoundInputs BallBoundInputs::from_model(const MultivariateModel& model, long n, const BoundConstants& k) {
  if (model.dimension() < 6) throw DomainError("normball: the ball inequality needs d >= 6 (six positive eigenvalues)");
  BallBoundInputs in;
  in.beta3_norm = model.beta3_norm();
  in.sigma2_trace = model.trace_sigma2();
  for (int i = 0; i < 6; ++i) in.top_eigs[static_cast<std::size_t>(i)] = model.eigenvalues()(i);
  in.n = n;
  in.constants = k;
  in.validate();
  return in;
}

void BallBoundInputs::validate() const {
  constants.validate();
  if (n < 1) throw DomainError("BallBoundInputs: n must be >= 1");
  for (std::size_t i = 0; i < 6; ++i) {
    if (!(top_eigs[i] > 0.0)) throw DomainError("normball: fewer than six positive eigenvalues");
    if (i > 0 && top_eigs[i] > top_eigs[i - 1]) throw DomainError("BallBoundInputs: eigenvalues must be descending");
  }
  if (!(sigma2_trace > 0.0) || !(beta3_norm > 0.0)) throw DomainError("BallBoundInputs: moments must be positive");
}

double BallBoundInputs::sigma_product() const {
  double p = 1.0;
  for (double e : top_eigs) p *= std::sqrt(e);
  return p;
}

double senatov_ball_delta(const BallBoundInputs& in, double radius, double center_dist) {
  in.validate();
  if (radius < 0.0 || center_dist < 0.0) throw DomainError("senatov_ball_delta: radius and distance must be >= 0");
  const double r = std::abs(radius - center_dist);
  const double sigma = std::sqrt(in.sigma2_trace);
  const double s3 = sigma * sigma * sigma;
  const double prod = in.sigma_product();
  const double decay = std::exp(-in.constants.c * r * r / in.sigma2_trace);
  const double pre = in.constants.C * in.beta3_norm / std::sqrt(static_cast<double>(in.n)) / (1.0 + r * r * r / s3);
  return pre * (std::pow(radius, 3) / prod * decay + 1.0 / s3 + decay / std::sqrt(prod));
}

double holder_constant() { return std::pow(1.5, 2.5) * std::exp(1.0 / std::exp(1.0)) * 8.0; }

HolderIntegrals holder_t_integrals(double norm_y, double h) {
  if (norm_y < 0.0 || !(h > 0.0)) throw DomainError("holder_t_integrals: need norm_y >= 0, h > 0");
  HolderIntegrals out;
  out.i1_bound = holder_constant() * std::pow(h, 1.5) * std::exp(-norm_y * norm_y / (16.0 * h));
  out.i2_exact = std::exp(-norm_y * norm_y / (8.0 * h));
  out.i3_bound = std::pow(2.0 * h, 1.5) * boost::math::tgamma(2.5);
  return out;
}

HolderQuadrature holder_t_quadrature(double norm_y, double h, const QuadratureSpec& q) {
  if (norm_y < 0.0 || !(h > 0.0)) throw DomainError("holder_t_quadrature: need norm_y >= 0, h > 0");
  const auto inside = [norm_y, h](double t) { return norm_y * norm_y < 8.0 * h * std::log(1.0 / t); };
  const auto weight = [h](double t) { return std::pow(2.0 * h * std::log(1.0 / t), 1.5); };
  // The indicator jumps at t* = exp(-|y|^2/(8h)); integrate each side separately.
  const double t_star = std::exp(-norm_y * norm_y / (8.0 * h));
  const auto split = [&](const ScalarFunction& g) {
    Estimate total = Estimate::closed_form(0.0);
    for (auto [a, b] : {std::pair{0.0, t_star}, std::pair{t_star, 1.0}}) {
      if (!(a < b)) continue;
      const Estimate e = integrate_1d(g, a, b, q);
      total.value += e.value;
      total.err += e.err;
      total.converged = total.converged && e.converged;
    }
    total.kind = EstimateKind::quadrature;
    return total;
  };
  HolderQuadrature out;
  out.weighted_inside = split([&](double t) { return inside(t) ? weight(t) : 0.0; });
  out.indicator_inside = split([&](double t) { return inside(t) ? 1.0 : 0.0; });
  out.weighted_outside = split([&](double t) { return inside(t) ? 0.0 : weight(t); });
  return out;
}

namespace {

double normball_prefactor(const BallBoundInputs& in, int d, double h) {
  const double sigma3 = std::pow(in.sigma2_trace, 1.5);
  const double prod = in.sigma_product();
  return in.constants.C * in.beta3_norm / (std::sqrt(static_cast<double>(in.n)) * std::pow(2.0 * kPi, d / 2.0)) *
         (std::pow(h, 1.5) / prod + 1.0 / sigma3 + 1.0 / std::sqrt(prod));
}

}  // namespace

Estimate normball_delta_bound(const VectorFunction& f, const MultivariateModel& model, double h, long n,
                              const BoundConstants& k, const NormballSampling& mc) {
  if (!(h > 0.0)) throw DomainError("normball_delta_bound: h must be > 0");
  const BallBoundInputs in = BallBoundInputs::from_model(model, n, k);
  const int d = model.dimension();
  const double s8 = 8.0 * std::pow(in.sigma2_trace, 1.5);
  const double tau = mc.proposal_scale;
  // With s = y h: int [...](y) |f(yh)| dy = h^{-d} int [...](s/h) |f(s)| ds.
  const RunningStats st = run_chunked<RunningStats>(static_cast<std::uint64_t>(mc.samples), [&](std::uint64_t c, std::uint64_t, std::uint64_t m) {
    Generator gen(mc.rng.substream(c));
    RunningStats acc;
    Eigen::VectorXd v(d);
    for (std::uint64_t i = 0; i < m; ++i) {
      for (int j = 0; j < d; ++j) v(j) = gen.normal();
      const Eigen::VectorXd s = tau * v;
      const double r = s.norm();
      const double weight = s8 / (s8 + r * r * r) + std::exp(-r * r / (16.0 * h * h));
      // proposal density of s: (2 pi tau^2)^{-d/2} exp(-|v|^2/2)
      const double log_q = -0.5 * v.squaredNorm() - d * std::log(tau) - 0.5 * d * std::log(2.0 * kPi);
      const double val = weight * std::abs(f(s)) * std::exp(-log_q);
      if (!std::isfinite(val)) throw DomainError("f not admissible: weighted integrand is not finite");
      acc.push(val);
    }
    return acc;
  });
  const double scale = normball_prefactor(in, d, h) * std::pow(h, -d);
  return {scale * st.mean, scale * st.standard_error(), EstimateKind::monte_carlo, true};
}

Estimate normball_delta_bound_radial(const std::function<double(double)>& profile, const MultivariateModel& model,
                                     double h, long n, const BoundConstants& k, const QuadratureSpec& q) {
  if (!(h > 0.0)) throw DomainError("normball_delta_bound: h must be > 0");
  const BallBoundInputs in = BallBoundInputs::from_model(model, n, k);
  const int d = model.dimension();
  const double s8 = 8.0 * std::pow(in.sigma2_trace, 1.5);
  const double surface = 2.0 * std::pow(kPi, d / 2.0) / boost::math::tgamma(d / 2.0);
  const ScalarFunction radial = [&](double r) {
    const double hr = h * r;
    return std::pow(r, d - 1) * (s8 / (s8 + hr * hr * hr) + std::exp(-r * r / 16.0)) * std::abs(profile(hr));
  };
  Estimate e;
  try {
    e = integrate_semi_infinite(radial, 0.0, q);
  } catch (const DivergenceError& err) {
    throw DomainError(std::string("f not admissible: ") + err.what());
  }
  if (!std::isfinite(e.value)) throw DomainError("f not admissible: weighted integral is not finite");
  const double scale = normball_prefactor(in, d, h) * surface;
  return {scale * e.value, scale * e.err, EstimateKind::quadrature, e.converged};
}

BandwidthChoice optimize_bandwidth(const FourierFunction& f, const MultivariateModel& model, long n,
                                   std::span<const double> h_grid, const BoundConstants& k,
                                   std::span<const Eigen::VectorXd> probes, const NormballSampling& mc) {
  if (h_grid.empty()) throw DomainError("optimize_bandwidth: empty h grid");
  BandwidthChoice out;
  out.total = std::numeric_limits<double>::infinity();
  bool any = false;
  const VectorFunction fv = [&f](const Eigen::VectorXd& x) { return f(x); };
  for (double h : h_grid) {
    double total = std::numeric_limits<double>::infinity();
    try {
      const double bias = sup_approx_error(f, {h, KernelKind::gaussian}, probes);
      total = 2.0 * bias + normball_delta_bound(fv, model, h, n, k, mc).value;
      any = true;
    } catch (const DomainError&) {
      if (model.dimension() < 6) throw;
    }
    out.totals.push_back(total);
    if (total < out.total || (total == out.total && any && h < out.h_star)) {
      out.total = total;
      out.h_star = h;
    }
  }
  if (!any) throw DomainError("optimize_bandwidth: no admissible bandwidth on the grid");
  return out;
}

}  // namespace cltlab
