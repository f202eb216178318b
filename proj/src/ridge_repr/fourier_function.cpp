#include <cmath>

#include "cltlab/errors.hpp"
#include "cltlab/ridge_repr.hpp"
#include "cltlab/special_functions.hpp"

namespace cltlab {

FourierFunction::FourierFunction(std::string name, std::vector<GaussianBump> bumps)
    : name_(std::move(name)), bumps_(std::move(bumps)) {
  if (bumps_.empty()) throw DomainError("FourierFunction: needs at least one bump");
  d_ = static_cast<int>(bumps_.front().mu.size());
  if (d_ < 1) throw DomainError("FourierFunction: dimension must be >= 1");
  for (const auto& b : bumps_) {
    if (b.mu.size() != d_ || b.ell.size() != d_) throw DomainError("FourierFunction: inconsistent bump dimensions");
    if ((b.ell.array() <= 0.0).any()) throw DomainError("FourierFunction: bump widths must be > 0");
  }
}

double FourierFunction::operator()(const Eigen::VectorXd& x) const {
  double s = 0.0;
  for (const auto& b : bumps_) s += b.weight * std::exp(-0.5 * ((x - b.mu).array() / b.ell.array()).square().sum());
  return s;
}

std::complex<double> FourierFunction::fourier(const Eigen::VectorXd& w) const {
  std::complex<double> s(0.0, 0.0);
  for (const auto& b : bumps_) {
    double mag = b.weight;
    for (int j = 0; j < d_; ++j) mag *= b.ell(j) * kInvSqrt2Pi * std::exp(-0.5 * b.ell(j) * b.ell(j) * w(j) * w(j));
    if (mag == 0.0) continue;
    s += std::polar(1.0, -w.dot(b.mu)) * mag;
  }
  return s;
}

double FourierFunction::phase(const Eigen::VectorXd& w) const {
  const double b = std::arg(fourier(w));
  return b == -kPi ? kPi : b;
}

double FourierFunction::f0() const { return (*this)(Eigen::VectorXd::Zero(d_)); }

Eigen::VectorXd FourierFunction::grad0() const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(d_);
  for (const auto& b : bumps_) {
    const double v = b.weight * std::exp(-0.5 * (b.mu.array() / b.ell.array()).square().sum());
    g += v * (b.mu.array() / b.ell.array().square()).matrix();
  }
  return g;
}

double FourierFunction::proposal_mass() const {
  double m = 0.0;
  for (const auto& b : bumps_) m += std::abs(b.weight);
  return m;
}

Eigen::VectorXd FourierFunction::sample_omega(Generator& gen) const {
  const double total = proposal_mass();
  double u = gen.uniform() * total;
  std::size_t k = 0;
  for (; k + 1 < bumps_.size(); ++k) {
    u -= std::abs(bumps_[k].weight);
    if (u < 0.0) break;
  }
  Eigen::VectorXd w(d_);
  for (int j = 0; j < d_; ++j) w(j) = gen.normal() / bumps_[k].ell(j);
  return w;
}

double FourierFunction::proposal_density(const Eigen::VectorXd& w) const {
  double s = 0.0;
  for (const auto& b : bumps_) {
    double dens = std::abs(b.weight);
    for (int j = 0; j < d_; ++j) dens *= b.ell(j) * kInvSqrt2Pi * std::exp(-0.5 * b.ell(j) * b.ell(j) * w(j) * w(j));
    s += dens;
  }
  return s / proposal_mass();
}

FourierFunction FourierFunction::convolved(double h) const {
  if (!(h > 0.0)) throw DomainError("convolved: h must be > 0");
  std::vector<GaussianBump> out;
  for (const auto& b : bumps_) {
    GaussianBump c = b;
    c.ell = (b.ell.array().square() + h * h).sqrt();
    c.weight = b.weight * (b.ell.array() / c.ell.array()).prod();
    out.push_back(c);
  }
  return {name_ + "*N(0,h^2)", out};
}

FourierFunction FourierFunction::combined(double a, const FourierFunction& other, double b) const {
  if (other.d_ != d_) throw DomainError("combined: dimension mismatch");
  std::vector<GaussianBump> out;
  for (auto bump : bumps_) {
    bump.weight *= a;
    out.push_back(bump);
  }
  for (auto bump : other.bumps_) {
    bump.weight *= b;
    out.push_back(bump);
  }
  return {name_ + "+" + other.name_, out};
}

FourierFunction gaussian_test_function(int d) {
  if (d < 1) throw DomainError("gaussian_test_function: d must be >= 1");
  return {"gauss_bump:d=" + std::to_string(d), {{1.0, Eigen::VectorXd::Zero(d), Eigen::VectorXd::Ones(d)}}};
}

FourierFunction shifted_test_function(int d) {
  if (d < 1) throw DomainError("shifted_test_function: d must be >= 1");
  GaussianBump b;
  b.weight = 1.0;
  b.mu.resize(d);
  b.ell.resize(d);
  for (int j = 0; j < d; ++j) {
    b.mu(j) = (j % 2 == 0 ? 0.3 : -0.2) / (1.0 + j / 2);
    b.ell(j) = j % 2 == 0 ? 1.0 : 0.8;
  }
  return {"shifted_bump:d=" + std::to_string(d), {b}};
}

}  // namespace cltlab
