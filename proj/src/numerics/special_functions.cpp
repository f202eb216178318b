#include "cltlab/special_functions.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "cltlab/errors.hpp"

namespace cltlab {

namespace {
constexpr double kSqrt2 = 1.41421356237309504880168872421;
}

double gauss_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double gauss_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double gauss_sf(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double gauss_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("gauss_quantile: p must lie in (0, 1)");
  return -kSqrt2 * boost::math::erfc_inv(2.0 * p);
}

double gauss_quantile_upper(double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("gauss_quantile_upper: q must lie in (0, 1)");
  return kSqrt2 * boost::math::erfc_inv(2.0 * q);
}

double gamma_p(double a, double x) { return boost::math::gamma_p(a, x); }

double gamma_q(double a, double x) { return boost::math::gamma_q(a, x); }

}  // namespace cltlab
