#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <cstdio>
#include <limits>

#include "cltlab/dist_zoo.hpp"
#include "cltlab/errors.hpp"
#include "cltlab/parallel.hpp"
#include "cltlab/quadrature.hpp"
#include "cltlab/special_functions.hpp"

namespace cltlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt3 = 1.73205080756887729352744634151;

void check_path_args(std::span<const long> ns, std::span<double> w, std::span<double> z, bool coupling) {
  if (w.size() != ns.size()) throw DomainError("draw_sum_path: output size mismatch");
  if (!z.empty() && z.size() != ns.size()) throw DomainError("draw_sum_path: coupled output size mismatch");
  if (!z.empty() && !coupling) throw DomainError("draw_sum_path: law has no exact Gaussian coupling");
  long prev = 0;
  for (long n : ns) {
    if (n <= prev) throw DomainError("draw_sum_path: n values must be ascending and >= 1");
    prev = n;
  }
}

// Integral of g over [a, b] with either end possibly infinite.
double integrate_span(const ScalarFunction& g, double a, double b) {
  if (!(a < b)) return 0.0;
  QuadratureSpec q;
  q.abs_tol = 1e-13;
  q.rel_tol = 1e-11;
  if (std::isfinite(a) && std::isfinite(b)) return integrate_1d(g, a, b, q).value;
  if (std::isfinite(a)) return integrate_semi_infinite(g, a, q).value;
  if (std::isfinite(b)) {
    const ScalarFunction r = [&g](double s) { return g(-s); };
    return integrate_semi_infinite(r, -b, q).value;
  }
  return integrate_real_line(g, q).value;
}

class NormalLaw final : public UnivariateLaw {
 public:
  std::string name() const override { return "normal"; }
  MomentSet moments() const override { return {1.0, 0.0, 2.0 * std::sqrt(2.0 / kPi), 3.0}; }
  std::complex<double> char_fn(double b) const override { return {std::exp(-0.5 * b * b), 0.0}; }
  double draw(Generator& gen) const override { return gen.normal(); }
  bool has_density() const override { return true; }
  double density(double x) const override { return gauss_pdf(x); }
  bool has_coupling() const override { return true; }
  void draw_sum_path(std::span<const long> ns, Generator& gen, std::span<double> w,
                     std::span<double> z) const override {
    check_path_args(ns, w, z, true);
    double s = 0.0;
    long prev = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      s += std::sqrt(static_cast<double>(ns[i] - prev)) * gen.normal();
      prev = ns[i];
      w[i] = s / std::sqrt(static_cast<double>(ns[i]));
      if (!z.empty()) z[i] = w[i];
    }
  }
};

// W = E - 1, E ~ Exp(1). Sums are Gamma(n) - n; the Gaussian partner is the
// quantile transform Phi^{-1}(F_{Gamma(n)}(G)).
class ExpCenteredLaw final : public UnivariateLaw {
 public:
  std::string name() const override { return "exp_centered"; }
  MomentSet moments() const override { return {1.0, 2.0, 12.0 / std::exp(1.0) - 2.0, 9.0}; }
  std::complex<double> char_fn(double b) const override {
    return std::exp(std::complex<double>(0.0, -b)) / std::complex<double>(1.0, -b);
  }
  double draw(Generator& gen) const override { return gen.exponential() - 1.0; }
  bool has_density() const override { return true; }
  double density(double x) const override { return x < -1.0 ? 0.0 : std::exp(-(x + 1.0)); }
  std::pair<double, double> support() const override { return {-1.0, kInf}; }
  bool has_coupling() const override { return true; }
  void draw_sum_path(std::span<const long> ns, Generator& gen, std::span<double> w,
                     std::span<double> z) const override {
    check_path_args(ns, w, z, true);
    double g = 0.0;
    long prev = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const double n = static_cast<double>(ns[i]);
      g += gen.gamma(static_cast<double>(ns[i] - prev));
      prev = ns[i];
      w[i] = (g - n) / std::sqrt(n);
      if (!z.empty()) {
        if (g < n) {
          const double p = std::max(gamma_p(n, g), 1e-300);
          z[i] = gauss_quantile(p);
        } else {
          const double q = std::max(gamma_q(n, g), 1e-300);
          z[i] = gauss_quantile_upper(q);
        }
      }
    }
  }
};

class UniformSymLaw final : public UnivariateLaw {
 public:
  std::string name() const override { return "uniform_sym"; }
  MomentSet moments() const override { return {1.0, 0.0, 9.0 / (4.0 * kSqrt3), 9.0 / 5.0}; }
  std::complex<double> char_fn(double b) const override {
    const double s = kSqrt3 * b;
    return {std::abs(s) < 1e-8 ? 1.0 - s * s / 6.0 : std::sin(s) / s, 0.0};
  }
  double draw(Generator& gen) const override { return kSqrt3 * (2.0 * gen.uniform() - 1.0); }
  bool has_density() const override { return true; }
  double density(double x) const override { return std::abs(x) <= kSqrt3 ? 1.0 / (2.0 * kSqrt3) : 0.0; }
  std::pair<double, double> support() const override { return {-kSqrt3, kSqrt3}; }
  void draw_sum_path(std::span<const long> ns, Generator& gen, std::span<double> w,
                     std::span<double> z) const override {
    check_path_args(ns, w, z, false);
    double s = 0.0;
    long k = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      for (; k < ns[i]; ++k) s += 2.0 * gen.uniform() - 1.0;
      w[i] = kSqrt3 * s / std::sqrt(static_cast<double>(ns[i]));
    }
  }
};

class BernoulliLaw final : public UnivariateLaw {
 public:
  explicit BernoulliLaw(double p) : p_(p) {}
  std::string name() const override {
    char buf[64];
    std::snprintf(buf, sizeof buf, "bernoulli:p=%g", p_);
    return buf;
  }
  MomentSet moments() const override {
    const double q = 1.0 - p_;
    const double s2 = p_ * q;
    return {s2, s2 * (q - p_), s2 * (q * q + p_ * p_), s2 * (q * q * q + p_ * p_ * p_)};
  }
  std::complex<double> char_fn(double b) const override {
    const std::complex<double> i(0.0, 1.0);
    return std::exp(-i * b * p_) * ((1.0 - p_) + p_ * std::exp(i * b));
  }
  double draw(Generator& gen) const override { return gen.uniform() < p_ ? 1.0 - p_ : -p_; }
  std::pair<double, double> support() const override { return {-p_, 1.0 - p_}; }
  bool is_lattice() const override { return true; }
  double truncated_abs_moment(int k, double thr, bool upper) const override {
    double total = 0.0;
    const double atoms[2][2] = {{1.0 - p_, p_}, {-p_, 1.0 - p_}};
    for (const auto& a : atoms) {
      const bool in_upper = std::abs(a[0]) >= thr;
      if (in_upper == upper) total += a[1] * std::pow(std::abs(a[0]), k);
    }
    return total;
  }

 private:
  double p_;
};

// Student t, 4 degrees of freedom: variance 2, E|T|^3 = 8, E T^4 = inf.
class StudentT4Law final : public UnivariateLaw {
 public:
  std::string name() const override { return "student_t4"; }
  MomentSet moments() const override { return {2.0, 0.0, 8.0, std::nullopt}; }
  std::complex<double> char_fn(double b) const override {
    const double a = std::abs(b);
    if (a < 1e-12) return {1.0, 0.0};
    if (a > 300.0) return {0.0, 0.0};
    return {2.0 * a * a * boost::math::cyl_bessel_k(2, 2.0 * a), 0.0};
  }
  double draw(Generator& gen) const override {
    const double z = gen.normal();
    const double chi2_over_nu = gen.gamma(2.0) / 2.0;
    return z / std::sqrt(chi2_over_nu);
  }
  bool has_density() const override { return true; }
  double density(double x) const override { return 0.375 * std::pow(1.0 + 0.25 * x * x, -2.5); }
};

}  // namespace

std::pair<double, double> UnivariateLaw::support() const { return {-kInf, kInf}; }

double UnivariateLaw::truncated_abs_moment(int k, double thr, bool upper) const {
  if (k < 0) throw DomainError("truncated_abs_moment: k must be >= 0");
  thr = std::max(thr, 0.0);
  if (has_density()) {
    const auto [lo, hi] = support();
    const ScalarFunction g = [this, k](double x) { return std::pow(std::abs(x), k) * density(x); };
    if (upper) {
      return integrate_span(g, std::max(lo, thr), hi) + integrate_span(g, lo, std::min(hi, -thr));
    }
    // Split at 0 so kinks of |x|^k and the support edges sit on node boundaries.
    return integrate_span(g, std::max(lo, -thr), std::min(hi, 0.0)) +
           integrate_span(g, std::max(lo, 0.0), std::min(hi, thr));
  }
  // No density: 10^6 draws on a fixed stream.
  const RngStream rs{0x5EEDF00DULL, std::hash<std::string>{}(name())};
  struct Acc {
    double sum = 0.0;
    std::uint64_t count = 0;
    void merge(const Acc& o) {
      sum += o.sum;
      count += o.count;
    }
  };
  const Acc acc = run_chunked<Acc>(1000000, [&](std::uint64_t c, std::uint64_t, std::uint64_t m) {
    Generator gen(rs.substream(c));
    Acc a;
    for (std::uint64_t i = 0; i < m; ++i) {
      const double x = draw(gen);
      if ((std::abs(x) >= thr) == upper) a.sum += std::pow(std::abs(x), k);
    }
    a.count = m;
    return a;
  });
  return acc.sum / static_cast<double>(acc.count);
}

void UnivariateLaw::draw_sum_path(std::span<const long> ns, Generator& gen, std::span<double> w,
                                  std::span<double> z) const {
  check_path_args(ns, w, z, has_coupling());
  const double sigma = std::sqrt(moments().sigma2);
  double s = 0.0;
  long k = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    for (; k < ns[i]; ++k) s += draw(gen);
    w[i] = s / (sigma * std::sqrt(static_cast<double>(ns[i])));
  }
}

double MomentSet::sigma() const { return std::sqrt(sigma2); }

double MomentSet::require_beta4() const {
  if (!beta4) throw MomentAbsentError("moment absent: E|W|^4 is infinite for this law");
  return *beta4;
}

void MomentSet::validate() const {
  const double tol = 1e-12;
  if (!(sigma2 > 0.0)) throw DomainError("MomentSet: sigma2 must be > 0");
  if (beta3 < std::pow(sigma2, 1.5) * (1.0 - tol)) throw DomainError("MomentSet: beta3 < sigma^3");
  if (beta4 && *beta4 < sigma2 * sigma2 * (1.0 - tol)) throw DomainError("MomentSet: beta4 < sigma^4");
  if (std::abs(mu3) > beta3 * (1.0 + tol)) throw DomainError("MomentSet: |mu3| > beta3");
}

UnivariateModel::UnivariateModel(std::shared_ptr<const UnivariateLaw> law)
    : law_(std::move(law)), name_(law_->name()), moments_(law_->moments()) {
  moments_.validate();
}

UnivariateModel normal_model() { return UnivariateModel(std::make_shared<NormalLaw>()); }
UnivariateModel exp_centered_model() { return UnivariateModel(std::make_shared<ExpCenteredLaw>()); }
UnivariateModel uniform_sym_model() { return UnivariateModel(std::make_shared<UniformSymLaw>()); }
UnivariateModel bernoulli_model(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("bernoulli: p must lie in (0, 1)");
  return UnivariateModel(std::make_shared<BernoulliLaw>(p));
}
UnivariateModel student_t4_model() { return UnivariateModel(std::make_shared<StudentT4Law>()); }

MomentSet moments(const UnivariateModel& model) { return model.moments(); }

std::complex<double> char_fn(const UnivariateModel& model, double b) {
  if (!std::isfinite(b)) throw DomainError("char_fn: b must be finite");
  return model.char_fn(b);
}

double sample_sum(const UnivariateModel& model, long n, const RngStream& rng) {
  if (n < 1) throw DomainError("sample_sum: n must be >= 1");
  Generator gen(rng);
  const long ns[1] = {n};
  double w[1];
  model.law().draw_sum_path(ns, gen, w, {});
  return w[0];
}

}  // namespace cltlab
