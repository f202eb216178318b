#include "cltlab/ridge_repr.hpp"

#include <cmath>

#include "cltlab/errors.hpp"
#include "cltlab/parallel.hpp"
#include "cltlab/relu_delta.hpp"
#include "cltlab/special_functions.hpp"

namespace cltlab {

namespace {

constexpr int kMaxQuadratureDim = 3;

// int over R^d of g(w) |fhat(w)| dw: nested quadrature for small d, else
// importance sampling from fm's proposal.
Estimate omega_integral(const FourierFunction& fm, const std::function<double(const Eigen::VectorXd&)>& g,
                        const QuadratureSpec& spec, const OmegaSampling& mc) {
  const int d = fm.dimension();
  if (d <= kMaxQuadratureDim) {
    Eigen::VectorXd w(d);
    const auto integrand = [&](std::span<const double> p) {
      for (int j = 0; j < d; ++j) w(j) = p[static_cast<std::size_t>(j)];
      const double mag = fm.fourier_magnitude(w);
      if (mag == 0.0) return 0.0;
      return mag * g(w);
    };
    return integrate_nd(integrand, d, spec);
  }
  if (mc.samples < 2) throw DomainError("omega_integral: need at least 2 samples");
  const RunningStats st = run_chunked<RunningStats>(static_cast<std::uint64_t>(mc.samples), [&](std::uint64_t k, std::uint64_t, std::uint64_t m) {
    Generator gen(mc.rng.substream(k));
    RunningStats s;
    for (std::uint64_t i = 0; i < m; ++i) {
      const Eigen::VectorXd w = fm.sample_omega(gen);
      const double q = fm.proposal_density(w);
      s.push(q > 0.0 ? fm.fourier_magnitude(w) / q * g(w) : 0.0);
    }
    return s;
  });
  return {st.mean, st.standard_error(), EstimateKind::monte_carlo, true};
}

// int_0^s (s - u) cos(u + c) du by quadrature.
double ridge_u_integral(double s, double c, const QuadratureSpec& spec) {
  if (s == 0.0) return 0.0;
  const ScalarFunction g = [s, c](double u) { return (s - u) * std::cos(u + c); };
  return integrate_1d(g, 0.0, s, spec).value;
}

}  // namespace

std::complex<double> relu_complex_identity(double z, const QuadratureSpec& spec) {
  if (!std::isfinite(z)) throw DomainError("relu_complex_identity: z must be finite");
  if (z == 0.0) return {0.0, 0.0};
  // Only one of (z - u)_+ and (-z - u)_+ is non-zero on u >= 0.
  const double s = std::abs(z);
  const double sign = z > 0.0 ? 1.0 : -1.0;
  const ScalarFunction re = [s](double u) { return (s - u) * std::cos(u); };
  const ScalarFunction im = [s, sign](double u) { return (s - u) * sign * std::sin(u); };
  const double r = integrate_1d(re, 0.0, s, spec).value;
  const double i = integrate_1d(im, 0.0, s, spec).value;
  return {-r, -i};
}

Estimate barron_condition(const FourierFunction& fm, const Eigen::VectorXd& x, const QuadratureSpec& spec,
                          const OmegaSampling& mc) {
  if (x.size() != fm.dimension()) throw DomainError("barron_condition: x has wrong dimension");
  if (x.isZero(0.0)) return Estimate::closed_form(0.0);
  const auto weight = [&x](const Eigen::VectorXd& w) {
    const double z = std::abs(w.dot(x));
    return std::min(2.0 * z, 0.5 * z * z);
  };
  try {
    Estimate e = omega_integral(fm, weight, spec, mc);
    if (!std::isfinite(e.value)) throw HypothesisError("representation hypothesis fails at x: weighted Fourier integral is not finite");
    return e;
  } catch (const DivergenceError& err) {
    throw HypothesisError(std::string("representation hypothesis fails at x: ") + err.what());
  }
}

double reconstruct_ridge(const FourierFunction& fm, const Eigen::VectorXd& x, const QuadratureSpec& spec,
                         const OmegaSampling& mc) {
  const Estimate barron = barron_condition(fm, x, spec, mc);
  const double base = fm.f0() + fm.grad0().dot(x);
  if (barron.value == 0.0) return base;
  const QuadratureSpec inner = spec.scaled(0.1);
  const auto integrand = [&](const Eigen::VectorXd& w) {
    const double z = w.dot(x);
    const double s = std::abs(z);
    // |inner| <= min{2s, s^2/2}; skip contributions far below tolerance.
    if (std::min(2.0 * s, 0.5 * s * s) * fm.fourier_magnitude(w) < 1e-18) return 0.0;
    const double eps = z > 0.0 ? 1.0 : -1.0;
    return ridge_u_integral(s, eps * fm.phase(w), inner);
  };
  return base - omega_integral(fm, integrand, spec, mc).value;
}

ActivationModel gaussian_bump_activation(double a) {
  if (a == 0.0) throw DomainError("gaussian_bump_activation: a must be non-zero");
  ActivationModel m;
  m.name = "gaussian_bump";
  m.h = [](double t) { return std::exp(-0.5 * t * t); };
  m.h_fourier = [](double b) { return std::complex<double>(std::exp(-0.5 * b * b) * kInvSqrt2Pi, 0.0); };
  m.a = a;
  m.c_h = 0.0;
  m.reach = 12.0;
  return m;
}

ActivationModel funahashi_window(const std::function<double(double)>& sigmoid, double alpha, double probe_a) {
  if (!(alpha > 0.0)) throw DomainError("funahashi_window: alpha must be > 0");
  const double lo = sigmoid(-1e6);
  const double hi = sigmoid(1e6);
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("funahashi_window: sigmoid must have finite limits");
  if (hi < lo) throw DomainError("funahashi_window: sigmoid must be nondecreasing");
  ActivationModel m;
  m.name = "funahashi_window";
  m.h = [sigmoid, alpha](double t) { return sigmoid(t + alpha) - sigmoid(t - alpha); };

  QuadratureSpec q;
  q.abs_tol = 1e-12;
  q.rel_tol = 1e-10;
  // Pieces split at the window edges, where h may jump.
  const auto piecewise = [alpha, q](const ScalarFunction& g) {
    const ScalarFunction left = [&g](double s) { return g(-s); };
    const Estimate a = integrate_semi_infinite(left, alpha, q);
    const Estimate b = integrate_1d(g, -alpha, alpha, q);
    const Estimate c = integrate_semi_infinite(g, alpha, q);
    return Estimate{a.value + b.value + c.value, a.err + b.err + c.err, EstimateKind::quadrature,
                    a.converged && b.converged && c.converged};
  };
  const auto h = m.h;
  const Estimate l1 = piecewise([h](double t) { return std::abs(h(t)); });
  if (!l1.converged || !std::isfinite(l1.value)) throw DomainError("funahashi_window: integral of |h| did not converge");

  m.h_fourier = [h, piecewise](double b) {
    const Estimate re = piecewise([h, b](double t) { return h(t) * std::cos(b * t); });
    const Estimate im = piecewise([h, b](double t) { return -h(t) * std::sin(b * t); });
    return std::complex<double>(re.value, im.value) / (2.0 * kPi);
  };
  double a = probe_a;
  std::complex<double> ha = probe_a == 0.0 ? std::complex<double>(0.0) : m.h_fourier(probe_a);
  if (std::abs(ha) <= 1e-8) {
    bool found = false;
    for (int k = 1; k <= 200 && !found; ++k) {
      a = 0.1 * k;
      ha = m.h_fourier(a);
      found = std::abs(ha) > 1e-8;
    }
    if (!found) throw DomainError("funahashi_window: no frequency a in (0, 20] with |hhat(a)| > 1e-8");
  }
  m.a = a;
  m.c_h = std::arg(ha);
  // Effective support: where the window's mass has decayed below 1e-14.
  m.reach = alpha + 40.0;
  return m;
}

double reconstruct_activation(const FourierFunction& fm, const ActivationModel& act, const Eigen::VectorXd& x,
                              const QuadratureSpec& spec, const OmegaSampling& mc) {
  if (x.size() != fm.dimension()) throw DomainError("reconstruct_activation: x has wrong dimension");
  const std::complex<double> ha = act.h_fourier(act.a);
  if (std::abs(ha) < 1e-8) throw DomainError("ill-conditioned frequency: |hhat(a)| < 1e-8");
  const QuadratureSpec inner = spec.scaled(0.1);
  const auto integrand = [&](const Eigen::VectorXd& w) {
    const double shift = w.dot(x) / act.a;
    const double theta = act.c_h - fm.phase(w);
    // u runs over the window where h(shift + u) is non-negligible.
    const ScalarFunction g = [&](double u) { return act.h(shift + u) * std::cos(act.a * u + theta); };
    return integrate_1d(g, -shift - act.reach, -shift + act.reach, inner).value;
  };
  return omega_integral(fm, integrand, spec, mc).value / (2.0 * kPi * std::abs(ha));
}

ReluBoundFactory edgeworth_relu_profile(const BoundConstants& k, bool include_char_term) {
  return [k, include_char_term](const UnivariateModel& model, long n) {
    const CharSupEstimate sup = charfn_sup(model);
    const BoundValue probe = relu_pointwise_bound(model, n, 0.0, k, sup);
    ReluProfile p;
    p.vacuous = probe.vacuous;
    p.flag = probe.flag;
    const MomentSet m = model.moments();
    const double per_kappa = (include_char_term ? probe.total : probe.moment_term) / kappa(0.0);
    p.bound = [m, n, per_kappa](double t) {
      return std::abs(edgeworth_relu_prediction(m, n, t)) + per_kappa * kappa(t);
    };
    return p;
  };
}

RidgeBound delta_bound_ridge(const FourierFunction& fm, const ReluBoundFactory& univariate_delta,
                             const MultivariateModel& model, long n, const QuadratureSpec& spec,
                             const OmegaSampling& mc) {
  if (fm.dimension() != model.dimension()) throw DomainError("delta_bound_ridge: dimension mismatch");
  if (mc.samples < 2) throw DomainError("delta_bound_ridge: need at least 2 omega samples");
  RidgeBound out;
  RunningStats st;
  Generator gen(mc.rng);
  for (long i = 0; i < mc.samples; ++i) {
    const Eigen::VectorXd w = fm.sample_omega(gen);
    const double norm = w.norm();
    if (norm == 0.0) {
      st.push(0.0);
      continue;
    }
    const Eigen::VectorXd a = w / norm;
    double contribution = 0.0;
    for (double eps : {1.0, -1.0}) {
      const UnivariateModel proj = project(model, eps * a);
      const ReluProfile prof = univariate_delta(proj, n);
      if (prof.vacuous) {
        out.vacuous = true;
        out.vacuous_directions.push_back(eps * a);
      }
      const double s = norm * proj.moments().sigma();
      const Estimate tint = integrate_semi_infinite(prof.bound, 0.0, spec);
      contribution += s * s * tint.value;
    }
    st.push(fm.fourier_magnitude(w) / fm.proposal_density(w) * contribution);
  }
  out.value = st.mean;
  out.se = st.standard_error();
  out.directions = mc.samples;
  return out;
}

}  // namespace cltlab
