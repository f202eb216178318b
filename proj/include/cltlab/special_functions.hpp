#pragma once

namespace cltlab {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
inline constexpr double kSqrt2Pi = 2.50662827463100050241576528481;
inline constexpr double kPi = 3.14159265358979323846264338328;

double gauss_pdf(double x);
/// Phi(x), via erfc so both tails keep full relative accuracy.
double gauss_cdf(double x);
/// 1 - Phi(x).
double gauss_sf(double x);
/// Phi^{-1}(p) for p in (0, 1).
double gauss_quantile(double p);
/// Phi^{-1}(1 - q), accurate when q is tiny.
double gauss_quantile_upper(double q);

/// Regularized lower / upper incomplete gamma P(a, x), Q(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

}  // namespace cltlab
