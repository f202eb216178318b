#include "cltlab/edgeworth.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cltlab/errors.hpp"
#include "cltlab/special_functions.hpp"

namespace cltlab {

void BoundConstants::validate() const {
  if (!(C > 0.0)) throw DomainError("BoundConstants: C must be > 0");
  if (!(c > 0.0)) throw DomainError("BoundConstants: c must be > 0");
}

double edgeworth_cdf(const MomentSet& m, long n, double x) {
  if (n < 1) throw DomainError("edgeworth_cdf: n must be >= 1");
  const double s3 = std::pow(m.sigma2, 1.5);
  return gauss_cdf(x) + (1.0 - x * x) * std::exp(-0.5 * x * x) * m.mu3 /
                            (6.0 * std::sqrt(2.0 * kPi * static_cast<double>(n)) * s3);
}

CharSupEstimate charfn_sup(const UnivariateModel& model, double grid_step, double b_max) {
  const MomentSet& m = model.moments();
  CharSupEstimate est;
  est.b0 = m.sigma2 / (12.0 * m.beta3);
  est.b_max = b_max;
  if (!(grid_step > 0.0)) throw DomainError("charfn_sup: grid_step must be > 0");
  if (!(b_max > est.b0)) throw DomainError("charfn_sup: b_max must exceed b0");
  auto absv = [&](double b) { return std::abs(model.char_fn(b)); };

  const long steps = static_cast<long>(std::ceil((b_max - est.b0) / grid_step));
  double best = -1.0;
  double best_b = est.b0;
  for (long i = 0; i <= steps; ++i) {
    const double b = std::min(est.b0 + static_cast<double>(i) * grid_step, b_max);
    const double v = absv(b);
    if (v > best) {
      best = v;
      best_b = b;
    }
  }
  // Golden-section refinement around the grid maximum.
  double lo = std::max(est.b0, best_b - grid_step);
  double hi = std::min(b_max, best_b + grid_step);
  const double invphi = 0.6180339887498949;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = absv(x1);
  double f2 = absv(x2);
  for (int it = 0; it < 100 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = absv(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = absv(x2);
    }
  }
  const double refined_b = 0.5 * (lo + hi);
  const double refined = absv(refined_b);
  if (refined > best) {
    best = refined;
    best_b = refined_b;
  }
  est.sup_abs_v = std::min(1.0, std::max(0.0, best));
  est.argmax = best_b;
  est.vacuous = est.sup_abs_v >= 1.0 - kVacuityTolerance;
  return est;
}

CharSupEstimate charfn_sup(const UnivariateModel& model) {
  const MomentSet& m = model.moments();
  const double sigma = m.sigma();
  const double b0 = m.sigma2 / (12.0 * m.beta3);
  return charfn_sup(model, 0.01 / sigma, b0 + 50.0 / sigma);
}

double char_factor(double sup_abs_v, long n) {
  const double nn = static_cast<double>(n);
  const double base = sup_abs_v + 0.5 / nn;
  return std::exp(nn * std::log(base) + 6.0 * std::log(nn));
}

BoundValue nonuniform_bound(const UnivariateModel& model, long n, double x, const BoundConstants& k,
                            BoundVariant variant, const CharSupEstimate& sup) {
  k.validate();
  if (n < 1) throw DomainError("nonuniform_bound: n must be >= 1");
  const MomentSet& m = model.moments();
  const double nn = static_cast<double>(n);
  const double ax = 1.0 + std::abs(x);
  BoundValue out;
  if (variant == BoundVariant::fourth_moment) {
    const double b4 = m.require_beta4();
    out.moment_term = k.C * b4 / (m.sigma2 * m.sigma2 * nn * std::pow(ax, 4));
  } else {
    const double thr = m.sigma() * ax * std::sqrt(nn);
    const UnivariateLaw& law = model.law();
    const auto [lo, hi] = law.support();
    const double reach = std::max(std::abs(lo), std::abs(hi));
    const double upper3 = reach < thr ? 0.0 : law.truncated_abs_moment(3, thr, true);
    const double lower4 = law.truncated_abs_moment(4, thr, false);
    out.moment_term = k.C * upper3 / (std::pow(m.sigma2, 1.5) * std::sqrt(nn) * std::pow(ax, 3)) +
                      k.C * lower4 / (m.sigma2 * m.sigma2 * nn * std::pow(ax, 4));
  }
  out.char_term = k.C * char_factor(sup.sup_abs_v, n) / std::pow(ax, 4);
  out.total = out.moment_term + out.char_term;
  out.vacuous = sup.vacuous;
  out.char_term_decays = sup.sup_abs_v + 0.5 / nn < 1.0;
  if (out.vacuous) {
    out.flag = "bound vacuous: (sup+1/2n)^n does not decay";
  } else if (!out.char_term_decays) {
    out.flag = "char term grows at this n: sup|v|+1/(2n) >= 1";
  } else if (out.char_term > out.moment_term) {
    out.flag = "char term dominates: n^6 not yet beaten at this n";
  }
  return out;
}

BoundValue nonuniform_bound(const UnivariateModel& model, long n, double x, const BoundConstants& k,
                            BoundVariant variant) {
  return nonuniform_bound(model, n, x, k, variant, charfn_sup(model));
}

}  // namespace cltlab
