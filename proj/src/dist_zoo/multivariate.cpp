#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <sstream>

#include "cltlab/dist_zoo.hpp"
#include "cltlab/errors.hpp"
#include "cltlab/parallel.hpp"
#include "cltlab/special_functions.hpp"

namespace cltlab {

namespace {

constexpr long kBeta3Draws = 1000000;
constexpr long kProjectionBeta3Draws = 200000;

std::uint64_t hash_vector(const Eigen::VectorXd& v) {
  std::uint64_t h = 1469598103934665603ULL;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::uint64_t bits;
    const double x = v(i);
    std::memcpy(&bits, &x, sizeof bits);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xFF;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

struct SumAcc {
  double sum = 0.0;
  void merge(const SumAcc& o) { sum += o.sum; }
};

// Law of sum_j c_j xi_j with xi_j i.i.d. unit-variance coordinates.
class ProjectedLaw final : public UnivariateLaw {
 public:
  ProjectedLaw(std::string base, UnivariateModel coordinate, Eigen::VectorXd c)
      : base_(std::move(base)), coord_(std::move(coordinate)), c_(std::move(c)) {
    const MomentSet& cm = coord_.moments();
    const double s2 = c_.squaredNorm();
    const double k3 = cm.mu3;
    const double k4 = cm.require_beta4() - 3.0;
    double sum3 = 0.0;
    double sum4 = 0.0;
    for (Eigen::Index j = 0; j < c_.size(); ++j) {
      sum3 += std::pow(c_(j), 3);
      sum4 += std::pow(c_(j), 4);
    }
    m_.sigma2 = s2;
    m_.mu3 = k3 * sum3;
    m_.beta4 = k4 * sum4 + 3.0 * s2 * s2;
    if (coord_.name() == "normal") {
      m_.beta3 = std::pow(s2, 1.5) * 2.0 * std::sqrt(2.0 / kPi);
    } else {
      const RngStream rs{0xB3B3B3ULL, hash_vector(c_)};
      const SumAcc acc = run_chunked<SumAcc>(kProjectionBeta3Draws, [&](std::uint64_t k, std::uint64_t, std::uint64_t m) {
        Generator gen(rs.substream(k));
        SumAcc a;
        for (std::uint64_t i = 0; i < m; ++i) a.sum += std::pow(std::abs(draw(gen)), 3);
        return a;
      });
      m_.beta3 = acc.sum / static_cast<double>(kProjectionBeta3Draws);
      // MC can land a hair under the Lyapunov floor only through noise.
      m_.beta3 = std::max(m_.beta3, std::pow(s2, 1.5));
      m_.beta3 = std::max(m_.beta3, std::abs(m_.mu3));
    }
  }

  std::string name() const override {
    std::ostringstream os;
    os.precision(6);
    os << base_ << "|<a,X>:c=(";
    for (Eigen::Index j = 0; j < c_.size(); ++j) os << (j ? "," : "") << c_(j);
    os << ")";
    return os.str();
  }
  MomentSet moments() const override { return m_; }
  std::complex<double> char_fn(double b) const override {
    std::complex<double> v(1.0, 0.0);
    for (Eigen::Index j = 0; j < c_.size(); ++j) v *= coord_.char_fn(c_(j) * b);
    return v;
  }
  double draw(Generator& gen) const override {
    double s = 0.0;
    for (Eigen::Index j = 0; j < c_.size(); ++j) s += c_(j) * coord_.law().draw(gen);
    return s;
  }
  bool has_density() const override { return coord_.name() == "normal"; }
  double density(double x) const override {
    const double s = std::sqrt(m_.sigma2);
    return gauss_pdf(x / s) / s;
  }
  bool has_coupling() const override { return coord_.law().has_coupling(); }
  void draw_sum_path(std::span<const long> ns, Generator& gen, std::span<double> w,
                     std::span<double> z) const override {
    const std::size_t m = ns.size();
    std::vector<double> wj(m);
    std::vector<double> zj(z.empty() ? 0 : m);
    std::fill(w.begin(), w.end(), 0.0);
    std::fill(z.begin(), z.end(), 0.0);
    const double norm = std::sqrt(m_.sigma2);
    for (Eigen::Index j = 0; j < c_.size(); ++j) {
      coord_.law().draw_sum_path(ns, gen, wj, zj);
      const double cj = c_(j) / norm;
      for (std::size_t i = 0; i < m; ++i) {
        w[i] += cj * wj[i];
        if (!z.empty()) z[i] += cj * zj[i];
      }
    }
  }

 private:
  std::string base_;
  UnivariateModel coord_;
  Eigen::VectorXd c_;
  MomentSet m_;
};

// Parses "name:k=v,k=v".
std::pair<std::string, std::map<std::string, std::string>> parse_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  std::pair<std::string, std::map<std::string, std::string>> out;
  out.first = spec.substr(0, colon);
  if (colon == std::string::npos) return out;
  std::stringstream rest(spec.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UnknownModelError("malformed model parameter '" + item + "' in '" + spec + "'");
    out.second[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

double parse_number(const std::string& text, const std::string& spec) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw UnknownModelError("bad numeric parameter '" + text + "' in model '" + spec + "'");
  }
}

std::string format_name(const char* base, int d) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s:d=%d", base, d);
  return buf;
}

}  // namespace

MultivariateModel::MultivariateModel(std::string name, Eigen::MatrixXd factor, UnivariateModel coordinate)
    : name_(std::move(name)), factor_(std::move(factor)), coordinate_(std::move(coordinate)) {
  if (factor_.rows() < 1 || factor_.rows() != factor_.cols()) throw DomainError("MultivariateModel: factor must be square, d >= 1");
  if (std::abs(coordinate_.moments().sigma2 - 1.0) > 1e-12) throw DomainError("MultivariateModel: coordinate law must have unit variance");
  covariance_ = factor_ * factor_.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(covariance_);
  eigenvalues_ = es.eigenvalues().reverse();
  const int d = dimension();
  const bool isotropic_gauss = coordinate_.name() == "normal" && factor_.isIdentity(0.0);
  if (isotropic_gauss) {
    beta3_norm_ = std::pow(2.0, 1.5) * std::exp(std::lgamma((d + 3) / 2.0) - std::lgamma(d / 2.0));
  } else {
    const RngStream rs{0xB3B3B3ULL, std::hash<std::string>{}(name_)};
    const SumAcc acc = run_chunked<SumAcc>(kBeta3Draws, [&](std::uint64_t k, std::uint64_t, std::uint64_t m) {
      Generator gen(rs.substream(k));
      SumAcc a;
      for (std::uint64_t i = 0; i < m; ++i) a.sum += std::pow(draw(gen).norm(), 3);
      return a;
    });
    beta3_norm_ = acc.sum / static_cast<double>(kBeta3Draws);
  }
}

Eigen::VectorXd MultivariateModel::draw(Generator& gen) const {
  Eigen::VectorXd xi(dimension());
  for (int j = 0; j < dimension(); ++j) xi(j) = coordinate_.law().draw(gen);
  return factor_ * xi;
}

void MultivariateModel::draw_sum_path(std::span<const long> ns, Generator& gen, Eigen::MatrixXd& w,
                                      Eigen::MatrixXd* z) const {
  const int d = dimension();
  const auto m = static_cast<Eigen::Index>(ns.size());
  Eigen::MatrixXd xi(d, m);
  Eigen::MatrixXd zeta(z ? d : 0, m);
  std::vector<double> wj(ns.size());
  std::vector<double> zj(z ? ns.size() : 0);
  for (int j = 0; j < d; ++j) {
    coordinate_.law().draw_sum_path(ns, gen, wj, zj);
    for (Eigen::Index i = 0; i < m; ++i) {
      xi(j, i) = wj[static_cast<std::size_t>(i)];
      if (z) zeta(j, i) = zj[static_cast<std::size_t>(i)];
    }
  }
  w.noalias() = factor_ * xi;
  if (z) z->noalias() = factor_ * zeta;
}

MultivariateModel gauss_iso_model(int d) {
  if (d < 1) throw DomainError("gauss_iso: d must be >= 1");
  return {format_name("gauss_iso", d), Eigen::MatrixXd::Identity(d, d), normal_model()};
}

MultivariateModel exp_product_model(int d) {
  if (d < 1) throw DomainError("exp_product: d must be >= 1");
  return {format_name("exp_product", d), Eigen::MatrixXd::Identity(d, d), exp_centered_model()};
}

MultivariateModel box_affine_model(int d) {
  if (d < 1) throw DomainError("box_affine: d must be >= 1");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    a(j, j) = 1.0 / std::sqrt(1.0 + j);
    if (j > 0) a(j, j - 1) = 0.4 * a(j, j);
  }
  return {format_name("box_affine", d), a, uniform_sym_model()};
}

UnivariateModel project(const MultivariateModel& model, const Eigen::VectorXd& a) {
  if (a.size() != model.dimension()) throw DomainError("project: direction has wrong dimension");
  if (std::abs(a.norm() - 1.0) > 1e-10) throw DomainError("project: direction must be a unit vector");
  const Eigen::VectorXd c = model.factor().transpose() * a;
  const UnivariateModel& coord = model.coordinate();
  if (coord.name() == "normal" && std::abs(c.norm() - 1.0) < 1e-12) return normal_model();
  Eigen::Index nonzero = 0;
  Eigen::Index where = 0;
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    if (c(j) != 0.0) {
      ++nonzero;
      where = j;
    }
  }
  if (nonzero == 1 && c(where) == 1.0) return coord;
  return UnivariateModel(std::make_shared<ProjectedLaw>(model.name(), coord, c));
}

double l4_l2_constant(const MultivariateModel& model, std::span<const Eigen::VectorXd> directions) {
  if (directions.empty()) throw DomainError("l4_l2_constant: empty direction set");
  double best = 0.0;
  const double k4 = model.coordinate().moments().require_beta4() - 3.0;
  for (const auto& a : directions) {
    const Eigen::VectorXd c = model.factor().transpose() * a;
    const double s2 = c.squaredNorm();
    if (s2 < 1e-14) throw DomainError("l4_l2_constant: direction with zero variance");
    const double m4 = k4 * c.array().pow(4).sum() + 3.0 * s2 * s2;
    best = std::max(best, m4 / (s2 * s2));
  }
  return best;
}

bool is_multivariate_name(const std::string& spec) {
  const std::string base = spec.substr(0, spec.find(':'));
  return base == "gauss_iso" || base == "exp_product" || base == "box_affine";
}

UnivariateModel univariate_by_name(const std::string& spec) {
  const auto [base, params] = parse_spec(spec);
  auto no_params = [&, &params = params] {
    if (!params.empty()) throw UnknownModelError("model '" + base + "' takes no parameters");
  };
  if (base == "normal") return no_params(), normal_model();
  if (base == "exp_centered") return no_params(), exp_centered_model();
  if (base == "uniform_sym") return no_params(), uniform_sym_model();
  if (base == "student_t4") return no_params(), student_t4_model();
  if (base == "bernoulli") {
    const auto it = params.find("p");
    const double p = it == params.end() ? 0.5 : parse_number(it->second, spec);
    if (!(p > 0.0 && p < 1.0) || params.size() > (it == params.end() ? 0u : 1u)) throw UnknownModelError("bernoulli needs a single parameter p in (0, 1): '" + spec + "'");
    return bernoulli_model(p);
  }
  throw UnknownModelError("unknown univariate model '" + spec + "'");
}

MultivariateModel multivariate_by_name(const std::string& spec) {
  const auto [base, params] = parse_spec(spec);
  const auto it = params.find("d");
  if (!is_multivariate_name(spec)) throw UnknownModelError("unknown multivariate model '" + spec + "'");
  if (it == params.end() || params.size() != 1) throw UnknownModelError("model '" + base + "' needs exactly one parameter d: '" + spec + "'");
  const double dv = parse_number(it->second, spec);
  if (dv < 1 || dv > 4096 || dv != std::floor(dv)) throw UnknownModelError("dimension must be an integer in [1, 4096]: '" + spec + "'");
  const int d = static_cast<int>(dv);
  if (base == "gauss_iso") return gauss_iso_model(d);
  if (base == "exp_product") return exp_product_model(d);
  return box_affine_model(d);
}

std::vector<std::pair<std::string, std::string>> catalog_listing() {
  return {
      {"normal", "standard normal N(0,1)"},
      {"exp_centered", "Exp(1) - 1 (skewed, mu3 = 2)"},
      {"uniform_sym", "uniform on [-sqrt3, sqrt3] (symmetric, unit variance)"},
      {"bernoulli:p=<p>", "Bernoulli(p) - p (lattice; characteristic-function bounds are vacuous)"},
      {"student_t4", "Student t, 4 dof (variance 2, infinite fourth moment)"},
      {"gauss_iso:d=<d>", "standard Gaussian in R^d"},
      {"exp_product:d=<d>", "product of d centered Exp(1) coordinates"},
      {"box_affine:d=<d>", "uniform box under a lower-bidiagonal linear map (anisotropic)"},
  };
}

}  // namespace cltlab
