#include "cltlab/relu_delta.hpp"

#include <cmath>

#include "cltlab/errors.hpp"
#include "cltlab/quadrature.hpp"
#include "cltlab/special_functions.hpp"

namespace cltlab {

double gauss_relu_mean(double t) { return gauss_pdf(t) - t * gauss_sf(t); }

double kappa(double t) {
  if (t >= 0.0) return 1.0 / (3.0 * std::pow(1.0 + t, 3));
  return 2.0 / 3.0 - 1.0 / (3.0 * std::pow(1.0 - t, 3));
}

double edgeworth_relu_prediction(const MomentSet& m, long n, double t) {
  if (n < 1) throw DomainError("edgeworth_relu_prediction: n must be >= 1");
  return t * gauss_pdf(t) * m.mu3 / (6.0 * std::sqrt(static_cast<double>(n)) * std::pow(m.sigma2, 1.5));
}

double edgeworth_relu_prediction_negated(const MomentSet& m, long n, double t) {
  return -edgeworth_relu_prediction(m, n, t);
}

std::vector<DeltaEstimate> delta_relu_sweep(const UnivariateModel& model, std::span<const long> ns,
                                            std::span<const double> ts, long reps, const RngStream& rng) {
  if (reps < 10000) throw DomainError("delta_relu: reps must be >= 10^4");
  if (ts.empty()) throw DomainError("delta_relu: empty t grid");
  const UnivariateLaw& law = model.law();
  const bool coupled = law.has_coupling();
  const std::size_t nt = ts.size();
  const std::size_t nn = ns.size();
  const auto stats = mc_path_statistics(
      law, ns, reps, rng, coupled ? GaussianSide::coupled : GaussianSide::none, nn * nt,
      [&](std::span<const double> w, std::span<const double> z, std::span<double> out) {
        for (std::size_t i = 0; i < nn; ++i) {
          for (std::size_t j = 0; j < nt; ++j) {
            double v = std::max(w[i] - ts[j], 0.0);
            if (coupled) v -= std::max(z[i] - ts[j], 0.0);
            out[i * nt + j] = v;
          }
        }
      });
  std::vector<DeltaEstimate> res(nn * nt);
  for (std::size_t i = 0; i < nn; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const RunningStats& s = stats[i * nt + j];
      const double delta = coupled ? s.mean : s.mean - gauss_relu_mean(ts[j]);
      res[i * nt + j] = {delta, std::abs(delta), s.standard_error(), reps};
    }
  }
  return res;
}

DeltaEstimate delta_relu_mc(const UnivariateModel& model, long n, double t, long reps, const RngStream& rng) {
  const long ns[1] = {n};
  const double ts[1] = {t};
  return delta_relu_sweep(model, ns, ts, reps, rng).front();
}

BoundValue relu_pointwise_bound(const UnivariateModel& model, long n, double t, const BoundConstants& k,
                                const CharSupEstimate& sup) {
  k.validate();
  const MomentSet& m = model.moments();
  const double b4 = m.require_beta4();
  const double kt = kappa(t);
  const double nn = static_cast<double>(n);
  BoundValue out;
  out.moment_term = k.C * b4 / (m.sigma2 * m.sigma2 * nn) * kt;
  out.char_term = k.C * char_factor(sup.sup_abs_v, n) * kt;
  out.total = out.moment_term + out.char_term;
  out.vacuous = sup.vacuous;
  out.char_term_decays = sup.sup_abs_v + 0.5 / nn < 1.0;
  if (out.vacuous) out.flag = "bound vacuous: (sup+1/2n)^n does not decay";
  else if (!out.char_term_decays) out.flag = "char term grows at this n: sup|v|+1/(2n) >= 1";
  return out;
}

BoundValue relu_pointwise_bound(const UnivariateModel& model, long n, double t, const BoundConstants& k) {
  return relu_pointwise_bound(model, n, t, k, charfn_sup(model));
}

std::vector<ReluDeltaReport> relu_delta_reports(const UnivariateModel& model, std::span<const long> ns,
                                                std::span<const double> ts, long reps, const RngStream& rng,
                                                const BoundConstants& k) {
  const auto mc = delta_relu_sweep(model, ns, ts, reps, rng);
  const CharSupEstimate sup = charfn_sup(model);
  std::vector<ReluDeltaReport> out;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    for (std::size_t j = 0; j < ts.size(); ++j) {
      ReluDeltaReport r;
      r.n = ns[i];
      r.t = ts[j];
      r.mc = mc[i * ts.size() + j];
      r.prediction = edgeworth_relu_prediction(model.moments(), ns[i], ts[j]);
      r.bound = relu_pointwise_bound(model, ns[i], ts[j], k, sup);
      r.kappa_t = kappa(ts[j]);
      out.push_back(r);
    }
  }
  return out;
}

Zeta2Bound zeta2_bound(const UnivariateModel& model, long n, const BoundConstants& k, const CharSupEstimate& sup) {
  Zeta2Bound out;
  const MomentSet& m = model.moments();
  out.prediction = -zeta2_prediction_negated(m, n);
  // kappa integrates to 1/6 over [0, inf); relu_pointwise_bound at kappa = 1/6
  // is exactly (C/6)[...].
  BoundValue b = relu_pointwise_bound(model, n, 0.0, k, sup);
  const double scale = (1.0 / 6.0) / kappa(0.0);
  b.moment_term *= scale;
  b.char_term *= scale;
  b.total = b.moment_term + b.char_term;
  out.bound = b;
  return out;
}

Zeta2Bound zeta2_bound(const UnivariateModel& model, long n, const BoundConstants& k) {
  return zeta2_bound(model, n, k, charfn_sup(model));
}

double zeta2_prediction_negated(const MomentSet& m, long n) {
  if (n < 1) throw DomainError("zeta2: n must be >= 1");
  return -m.mu3 / (std::pow(m.sigma2, 1.5) * 6.0 * std::sqrt(2.0 * kPi * static_cast<double>(n)));
}

double Zeta2Estimate::combined_err() const { return se + discretization_err; }

double trapezoid_relu_integral(double w, double h, double t_max) {
  if (w <= 0.0) return 0.0;
  if (w >= t_max) {
    // Linear on the whole grid: the trapezoid rule is exact.
    return w * t_max - 0.5 * t_max * t_max + 0.5 * (w - t_max) * (w - t_max);
  }
  const double exact = 0.5 * w * w;
  const double tk = std::floor(w / h) * h;  // grid node just below the kink
  const double r = w - tk;
  return exact - 0.5 * r * r + 0.5 * h * r;
}

std::vector<Zeta2Estimate> zeta2_mc(const UnivariateModel& model, std::span<const long> ns, long reps,
                                    const RngStream& rng, double t_max, double step) {
  if (!(step > 0.0) || !(t_max > step)) throw DomainError("zeta2_mc: need 0 < step < t_max");
  const double ratio = t_max / step;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 || static_cast<long>(std::round(ratio)) % 2 != 0) {
    throw DomainError("zeta2_mc: t_max must be an even multiple of step");
  }
  const UnivariateLaw& law = model.law();
  const bool coupled = law.has_coupling();
  const std::size_t nn = ns.size();
  const auto stats = mc_path_statistics(
      law, ns, reps, rng, coupled ? GaussianSide::coupled : GaussianSide::none, 2 * nn,
      [&](std::span<const double> w, std::span<const double> z, std::span<double> out) {
        for (std::size_t i = 0; i < nn; ++i) {
          double fine = trapezoid_relu_integral(w[i], step, t_max);
          double coarse = trapezoid_relu_integral(w[i], 2.0 * step, t_max);
          if (coupled) {
            fine -= trapezoid_relu_integral(z[i], step, t_max);
            coarse -= trapezoid_relu_integral(z[i], 2.0 * step, t_max);
          }
          out[2 * i] = fine;
          out[2 * i + 1] = coarse;
        }
      });
  // Gaussian side when uncoupled: same rule applied to gauss_relu_mean, plus
  // the analytic tail int_{t_max}^inf E(Z - t)_+ dt = E(Z - t_max)_+^2 / 2.
  auto gauss_side = [&](double h) {
    const long k = static_cast<long>(std::round(t_max / h));
    double s = 0.0;
    for (long i = 0; i <= k; ++i) {
      const double wgt = (i == 0 || i == k) ? 0.5 : 1.0;
      s += wgt * gauss_relu_mean(static_cast<double>(i) * h);
    }
    const double a = t_max;
    const double tail = 0.5 * ((1.0 + a * a) * gauss_sf(a) - a * gauss_pdf(a));
    return h * s + tail;
  };
  const double g_fine = coupled ? 0.0 : gauss_side(step);
  const double g_coarse = coupled ? 0.0 : gauss_side(2.0 * step);
  std::vector<Zeta2Estimate> out(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    const double fine = stats[2 * i].mean - g_fine;
    const double coarse = stats[2 * i + 1].mean - g_coarse;
    out[i] = {ns[i], fine, stats[2 * i].standard_error(), std::abs(fine - coarse) / 3.0};
  }
  return out;
}

AppendixE appendix_e_integrals(double t) {
  QuadratureSpec q;
  q.abs_tol = 1e-13;
  q.rel_tol = 1e-13;
  AppendixE out;
  const ScalarFunction herm = [t](double s) {
    const double u = t + s;
    return (1.0 - u * u) * gauss_pdf(u);
  };
  out.hermite_tail = integrate_semi_infinite(herm, 0.0, q);
  const ScalarFunction kap = [t](double s) { return std::pow(1.0 + std::abs(t + s), -4.0); };
  if (t >= 0.0) {
    out.kappa_quadrature = integrate_semi_infinite(kap, 0.0, q);
  } else {
    // The kink of |t + s| sits at s = -t.
    const Estimate left = integrate_1d(kap, 0.0, -t, q);
    const Estimate right = integrate_semi_infinite(kap, -t, q);
    out.kappa_quadrature = {left.value + right.value, left.err + right.err, EstimateKind::quadrature,
                            left.converged && right.converged};
  }
  return out;
}

std::vector<DeltaEstimate> abs_moment_gap_mc(const UnivariateModel& model, std::span<const long> ns, long reps,
                                             const RngStream& rng) {
  const RealFunction f = [](double x) { return std::max(x, 0.0) + std::max(-x, 0.0); };
  std::optional<double> closed;
  if (!model.law().has_coupling()) closed = std::sqrt(2.0 / kPi);
  return estimate_delta_f_path(model, f, ns, reps, rng, closed);
}

BoundValue abs_moment_gap_bound(const UnivariateModel& model, long n, const BoundConstants& k) {
  BoundValue b = relu_pointwise_bound(model, n, 0.0, k);
  b.moment_term *= 2.0;
  b.char_term *= 2.0;
  b.total = b.moment_term + b.char_term;
  return b;
}

}  // namespace cltlab
