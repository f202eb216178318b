#include "cltlab/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cltlab/errors.hpp"
#include "cltlab/special_functions.hpp"

namespace cltlab {

namespace {

struct StatsAcc {
  std::vector<RunningStats> stats;
  void merge(const StatsAcc& o) {
    if (stats.empty()) {
      stats = o.stats;
      return;
    }
    for (std::size_t i = 0; i < stats.size(); ++i) stats[i].merge(o.stats[i]);
  }
};

void check_reps(long reps) {
  if (reps < kMinReps) {
    std::ostringstream os;
    os << "replications must be >= " << kMinReps << " (got " << reps << ")";
    throw DomainError(os.str());
  }
}

// Solves g(w) = t for monotone g; returns P(g(Z) >= t).
double gaussian_upper_level_prob(const RealFunction& g, double t) {
  constexpr double kSpan = 40.0;
  const double lo_val = g(-kSpan);
  const double hi_val = g(kSpan);
  const bool increasing = hi_val >= lo_val;
  const double vmin = std::min(lo_val, hi_val);
  const double vmax = std::max(lo_val, hi_val);
  if (t <= vmin) return 1.0;
  if (t > vmax) return 0.0;
  // Locate the boundary point of {w : g(w) >= t}.
  double a = -kSpan;
  double b = kSpan;
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    const double m = 0.5 * (a + b);
    const bool in_set = g(m) >= t;
    if (increasing == in_set) b = m; else a = m;
  }
  const double w_star = 0.5 * (a + b);
  return increasing ? gauss_sf(w_star) : gauss_cdf(w_star);
}

}  // namespace

std::vector<RunningStats> mc_path_statistics(
    const UnivariateLaw& law, std::span<const long> ns, long reps, const RngStream& rng, GaussianSide side,
    std::size_t outputs,
    const std::function<void(std::span<const double>, std::span<const double>, std::span<double>)>& per_rep) {
  check_reps(reps);
  if (ns.empty()) throw DomainError("mc_path_statistics: empty n list");
  if (side == GaussianSide::coupled && !law.has_coupling()) throw DomainError("mc_path_statistics: law has no coupling");
  const std::size_t m = ns.size();
  const StatsAcc acc = run_chunked<StatsAcc>(static_cast<std::uint64_t>(reps), [&](std::uint64_t k, std::uint64_t, std::uint64_t count) {
    Generator gen(rng.substream(k));
    StatsAcc a;
    a.stats.resize(outputs);
    std::vector<double> w(m);
    std::vector<double> z(side == GaussianSide::none ? 0 : m);
    std::vector<double> out(outputs);
    const std::span<double> zc = side == GaussianSide::coupled ? std::span<double>(z) : std::span<double>();
    for (std::uint64_t r = 0; r < count; ++r) {
      law.draw_sum_path(ns, gen, w, zc);
      if (side == GaussianSide::independent) std::fill(z.begin(), z.end(), gen.normal());
      per_rep(w, z, out);
      for (std::size_t i = 0; i < outputs; ++i) a.stats[i].push(out[i]);
    }
    return a;
  });
  return acc.stats;
}

std::vector<DeltaEstimate> estimate_delta_f_path(const UnivariateModel& model, const RealFunction& f,
                                                 std::span<const long> ns, long reps, const RngStream& rng,
                                                 std::optional<double> gaussian_mean) {
  const UnivariateLaw& law = model.law();
  const GaussianSide side =
      gaussian_mean ? GaussianSide::none : (law.has_coupling() ? GaussianSide::coupled : GaussianSide::independent);
  const std::size_t m = ns.size();
  const auto stats = mc_path_statistics(law, ns, reps, rng, side, m, [&](std::span<const double> w, std::span<const double> z, std::span<double> out) {
    for (std::size_t i = 0; i < m; ++i) {
      double v = f(w[i]);
      if (std::isnan(v)) {
        std::ostringstream os;
        os.precision(17);
        os << "f returned NaN at sample W_n = " << w[i] << " (n = " << ns[i] << ")";
        throw NumericalError(os.str());
      }
      if (!z.empty()) {
        const double g = f(z[i]);
        if (std::isnan(g)) {
          std::ostringstream os;
          os.precision(17);
          os << "f returned NaN at Gaussian sample Z = " << z[i];
          throw NumericalError(os.str());
        }
        v -= g;
      }
      out[i] = v;
    }
  });
  std::vector<DeltaEstimate> res(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double delta = stats[i].mean - gaussian_mean.value_or(0.0);
    res[i] = {delta, std::abs(delta), stats[i].standard_error(), reps};
  }
  return res;
}

std::vector<EcdfPoint> ecdf_path(const UnivariateModel& model, std::span<const long> ns, std::span<const double> xs,
                                 long reps, const RngStream& rng) {
  if (xs.empty()) throw DomainError("ecdf_path: empty x grid");
  const std::size_t m = ns.size();
  const std::size_t k = xs.size();
  const auto stats = mc_path_statistics(model.law(), ns, reps, rng, GaussianSide::none, m * k,
                                        [&](std::span<const double> w, std::span<const double>, std::span<double> out) {
                                          for (std::size_t i = 0; i < m; ++i)
                                            for (std::size_t j = 0; j < k; ++j) out[i * k + j] = w[i] <= xs[j] ? 1.0 : 0.0;
                                        });
  std::vector<EcdfPoint> res(m * k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) res[i * k + j] = {ns[i], xs[j], stats[i * k + j].mean, stats[i * k + j].standard_error()};
  return res;
}

DeltaEstimate estimate_delta_f(const UnivariateModel& model, const RealFunction& f, long n, long reps,
                               const RngStream& rng, std::optional<double> gaussian_mean) {
  const long ns[1] = {n};
  return estimate_delta_f_path(model, f, ns, reps, rng, gaussian_mean).front();
}

LevelSetResult estimate_delta_levelset(const UnivariateModel& model, const RealFunction& g, long n,
                                       std::span<const double> t_grid, long reps, const RngStream& rng) {
  if (t_grid.empty()) throw DomainError("estimate_delta_levelset: empty t grid");
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) throw DomainError("estimate_delta_levelset: t grid must be sorted");
  const std::size_t k = t_grid.size();
  std::vector<double> gauss(k);
  for (std::size_t j = 0; j < k; ++j) gauss[j] = gaussian_upper_level_prob(g, t_grid[j]);
  // Trapezoid weights so the per-replication integral gets its own se.
  std::vector<double> tw(k, 0.0);
  for (std::size_t j = 0; j + 1 < k; ++j) {
    const double hlf = 0.5 * (t_grid[j + 1] - t_grid[j]);
    tw[j] += hlf;
    tw[j + 1] += hlf;
  }
  const long ns[1] = {n};
  const auto stats = mc_path_statistics(model.law(), ns, reps, rng, GaussianSide::none, k + 1,
                                        [&](std::span<const double> w, std::span<const double>, std::span<double> out) {
                                          const double gw = g(w[0]);
                                          if (std::isnan(gw)) throw NumericalError("g returned NaN");
                                          double trap = 0.0;
                                          for (std::size_t j = 0; j < k; ++j) {
                                            out[j] = gw >= t_grid[j] ? 1.0 : 0.0;
                                            trap += tw[j] * out[j];
                                          }
                                          out[k] = trap;
                                        });
  LevelSetResult res;
  double gauss_trap = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    res.points.push_back({t_grid[j], stats[j].mean - gauss[j], stats[j].standard_error()});
    gauss_trap += tw[j] * gauss[j];
  }
  res.trapezoid = stats[k].mean - gauss_trap;
  res.trapezoid_se = stats[k].standard_error();
  return res;
}

LevelSetResult estimate_delta_levelset(const MultivariateModel& model, const Eigen::VectorXd& a,
                                       const RealFunction& g, long n, std::span<const double> t_grid, long reps,
                                       const RngStream& rng) {
  return estimate_delta_levelset(project(model, a), g, n, t_grid, reps, rng);
}

std::vector<DeltaEstimate> estimate_delta_f_path(const MultivariateModel& model, const VectorFunction& f,
                                                 std::span<const long> ns, long reps, const RngStream& rng) {
  check_reps(reps);
  if (ns.empty()) throw DomainError("estimate_delta_f_path: empty n list");
  const bool coupled = model.coordinate().law().has_coupling();
  const int d = model.dimension();
  const std::size_t m = ns.size();
  const StatsAcc acc = run_chunked<StatsAcc>(static_cast<std::uint64_t>(reps), [&](std::uint64_t k, std::uint64_t, std::uint64_t count) {
    Generator gen(rng.substream(k));
    StatsAcc a;
    a.stats.resize(m);
    Eigen::MatrixXd w(d, static_cast<Eigen::Index>(m));
    Eigen::MatrixXd z(d, static_cast<Eigen::Index>(m));
    Eigen::VectorXd zeta(d);
    for (std::uint64_t r = 0; r < count; ++r) {
      if (coupled) {
        model.draw_sum_path(ns, gen, w, &z);
      } else {
        model.draw_sum_path(ns, gen, w, nullptr);
        for (int j = 0; j < d; ++j) zeta(j) = gen.normal();
        z.colwise() = model.factor() * zeta;
      }
      for (std::size_t i = 0; i < m; ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        const double v = f(w.col(col)) - f(z.col(col));
        if (std::isnan(v)) throw NumericalError("f returned NaN on a multivariate sample");
        a.stats[i].push(v);
      }
    }
    return a;
  });
  std::vector<DeltaEstimate> res(m);
  for (std::size_t i = 0; i < m; ++i) {
    res[i] = {acc.stats[i].mean, std::abs(acc.stats[i].mean), acc.stats[i].standard_error(), reps};
  }
  return res;
}

double levelset_trapezoid(std::span<const LevelSetPoint> points) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < points.size(); ++j) {
    s += 0.5 * (points[j + 1].t - points[j].t) * (points[j].diff + points[j + 1].diff);
  }
  return s;
}

double aggregate_signed_measure(std::span<const SignedAtom> atoms) {
  double s = 0.0;
  for (const auto& a : atoms) {
    if (!(a.bound >= 0.0)) throw DomainError("aggregate_signed_measure: atom bound must be >= 0");
    s += std::abs(a.weight) * a.bound;
  }
  return s;
}

}  // namespace cltlab
