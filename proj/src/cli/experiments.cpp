#include <Eigen/Core>
#include <boost/version.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <map>

#include "cltlab/cli.hpp"
#include "cltlab/errors.hpp"
#include "cltlab/mc_oracle.hpp"
#include "cltlab/norm_moments.hpp"
#include "cltlab/normball.hpp"
#include "cltlab/parallel.hpp"
#include "cltlab/relu_delta.hpp"
#include "cltlab/ridge_repr.hpp"
#include "cltlab/special_functions.hpp"
#include "cltlab/sphere.hpp"

#ifndef CLTLAB_VERSION
#define CLTLAB_VERSION "unknown"
#endif

namespace cltlab::cli {

namespace {

std::vector<double> grid_or(const std::vector<double>& g, std::vector<double> fallback) {
  return g.empty() ? fallback : g;
}

std::string join_flags(std::initializer_list<std::string> parts) {
  std::string out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out += "; ";
    out += p;
  }
  // commas would break the CSV
  for (char& ch : out)
    if (ch == ',') ch = ';';
  return out;
}

/// |residual| / (moment term at C = 1), maximized over the rows of one n.
std::map<long, double> fit_constants(const std::vector<std::pair<long, double>>& ratios) {
  std::map<long, double> out;
  for (const auto& [n, r] : ratios) out[n] = std::max(out[n], r);
  return out;
}

FourierFunction test_function(const std::string& name, int d) {
  return name == "shifted" ? shifted_test_function(d) : gaussian_test_function(d);
}

Table relu_table(const ExperimentConfig& cfg, const RngStream& rng) {
  const UnivariateModel model = univariate_by_name(cfg.model);
  const auto ts = grid_or(cfg.grid, {0.0, 0.5, 1.0, 2.0});
  const auto reports = relu_delta_reports(model, cfg.n_values, ts, cfg.reps, rng, cfg.constants);
  std::vector<std::pair<long, double>> ratios;
  for (const auto& r : reports) ratios.emplace_back(r.n, std::abs(r.mc.delta - r.prediction) / (r.bound.moment_term / cfg.constants.C));
  const auto fitted = fit_constants(ratios);
  Table t;
  t.header = {"experiment", "model", "n", "t", "mc_value", "mc_se", "prediction", "residual",
              "bound", "moment_term", "char_term", "fitted_constant", "flags"};
  for (const auto& r : reports) {
    t.add_row({txt("relu_delta_sweep"), txt(cfg.model), num(r.n), num(r.t), num(r.mc.delta), num(r.mc.se),
               num(r.prediction), num(r.mc.delta - r.prediction), num(r.bound.total), num(r.bound.moment_term),
               num(r.bound.char_term), num(fitted.at(r.n)), txt(join_flags({r.bound.flag}))});
  }
  return t;
}

Table edgeworth_table(const ExperimentConfig& cfg, const RngStream& rng) {
  const UnivariateModel model = univariate_by_name(cfg.model);
  const auto xs = grid_or(cfg.grid, {-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0});
  const auto points = ecdf_path(model, cfg.n_values, xs, cfg.reps, rng);
  const CharSupEstimate sup = charfn_sup(model);
  const BoundVariant variant = model.moments().beta4 ? BoundVariant::fourth_moment : BoundVariant::k3;
  std::vector<BoundValue> bounds;
  std::vector<std::pair<long, double>> ratios;
  for (const auto& p : points) {
    bounds.push_back(nonuniform_bound(model, p.n, p.x, cfg.constants, variant, sup));
    const double pred = edgeworth_cdf(model.moments(), p.n, p.x);
    ratios.emplace_back(p.n, std::abs(p.ecdf - pred) / (bounds.back().moment_term / cfg.constants.C));
  }
  const auto fitted = fit_constants(ratios);
  Table t;
  t.header = {"experiment", "model", "n", "x", "mc_value", "mc_se", "prediction", "normal_cdf", "residual",
              "bound", "moment_term", "char_term", "fitted_constant", "flags"};
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const double pred = edgeworth_cdf(model.moments(), p.n, p.x);
    t.add_row({txt("edgeworth_sweep"), txt(cfg.model), num(p.n), num(p.x), num(p.ecdf), num(p.se), num(pred),
               num(gauss_cdf(p.x)), num(p.ecdf - pred), num(bounds[i].total), num(bounds[i].moment_term),
               num(bounds[i].char_term), num(fitted.at(p.n)),
               txt(join_flags({variant == BoundVariant::k3 ? "k3 variant (no fourth moment)" : "", bounds[i].flag}))});
  }
  return t;
}

Table zeta2_table(const ExperimentConfig& cfg, const RngStream& rng) {
  const UnivariateModel model = univariate_by_name(cfg.model);
  const auto est = zeta2_mc(model, cfg.n_values, cfg.reps, rng);
  const CharSupEstimate sup = charfn_sup(model);
  std::vector<Zeta2Bound> bounds;
  std::vector<std::pair<long, double>> ratios;
  for (const auto& e : est) {
    bounds.push_back(zeta2_bound(model, e.n, cfg.constants, sup));
    ratios.emplace_back(e.n, std::abs(e.value - bounds.back().prediction) / (bounds.back().bound.moment_term / cfg.constants.C));
  }
  const auto fitted = fit_constants(ratios);
  Table t;
  t.header = {"experiment", "model", "n", "mc_value", "mc_se", "discretization_err", "prediction", "residual",
              "bound", "moment_term", "fitted_constant", "flags"};
  for (std::size_t i = 0; i < est.size(); ++i) {
    const auto& e = est[i];
    const auto& b = bounds[i];
    t.add_row({txt("zeta2"), txt(cfg.model), num(e.n), num(e.value), num(e.se), num(e.discretization_err),
               num(b.prediction), num(e.value - b.prediction), num(b.bound.total), num(b.bound.moment_term),
               num(fitted.at(e.n)), txt(join_flags({b.bound.flag}))});
  }
  return t;
}

std::vector<Eigen::VectorXd> default_points(int d) {
  std::vector<Eigen::VectorXd> pts;
  if (d == 1) {
    for (int i = 0; i < 25; ++i) pts.push_back(Eigen::VectorXd::Constant(1, -3.0 + 0.25 * i));
  } else {
    // 5 x 5 in the first two coordinates, |x| <= 3
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
        x(0) = -2.1 + 1.05 * i;
        x(1) = -2.1 + 1.05 * j;
        pts.push_back(x);
      }
  }
  return pts;
}

Table ridge_reconstruct_table(const ExperimentConfig& cfg) {
  const int d = cfg.dimension;
  const FourierFunction f = test_function(cfg.function, d);
  const ActivationModel act = gaussian_bump_activation(1.0);
  const QuadratureSpec q{1e-10, 1e-10};
  const auto pts = cfg.points.empty() ? default_points(d) : cfg.points;
  Table t;
  t.header = {"experiment", "function", "d", "point", "x_norm", "exact", "ridge", "ridge_err", "activation", "activation_err"};
  long idx = 0;
  for (const auto& x : pts) {
    const double exact = f(x);
    const double r = reconstruct_ridge(f, x, q);
    const double a = reconstruct_activation(f, act, x, q);
    t.add_row({txt("ridge_reconstruct"), txt(cfg.function), num(static_cast<long>(d)), num(idx++), num(x.norm()),
               num(exact), num(r), num(std::abs(r - exact)), num(a), num(std::abs(a - exact))});
  }
  return t;
}

Table ridge_bound_table(const ExperimentConfig& cfg, const RngStream& rng) {
  const MultivariateModel model = multivariate_by_name(cfg.model);
  const FourierFunction f = test_function(cfg.function, model.dimension());
  const VectorFunction fv = [&f](const Eigen::VectorXd& x) { return f(x); };
  const auto mc = estimate_delta_f_path(model, fv, cfg.n_values, cfg.reps, rng);
  const auto profile = edgeworth_relu_profile(cfg.constants, false);
  Table t;
  t.header = {"experiment", "model", "function", "n", "mc_value", "mc_se", "bound", "bound_se", "mc_over_bound", "flags"};
  for (std::size_t i = 0; i < cfg.n_values.size(); ++i) {
    const RidgeBound b = delta_bound_ridge(f, profile, model, cfg.n_values[i], QuadratureSpec{1e-9, 1e-9});
    const std::string flag = b.vacuous ? "vacuous: " + std::to_string(b.vacuous_directions.size()) + " lattice directions" : "";
    t.add_row({txt("ridge_delta_bound"), txt(cfg.model), txt(cfg.function), num(cfg.n_values[i]), num(mc[i].delta),
               num(mc[i].se), num(b.value), num(b.se), num(mc[i].abs_delta / b.value),
               txt(join_flags({"char term omitted", flag}))});
  }
  return t;
}

Table normball_table(const ExperimentConfig& cfg, const RngStream& rng) {
  const MultivariateModel model = multivariate_by_name(cfg.model);
  const int d = model.dimension();
  const FourierFunction f = test_function(cfg.function, d);
  const VectorFunction fv = [&f](const Eigen::VectorXd& x) { return f(x); };
  std::vector<Eigen::VectorXd> probes = {Eigen::VectorXd::Zero(d)};
  {
    const Eigen::MatrixXd dirs = sphere_sample(d, 24, rng.substream(0xFFFF));
    for (int j = 0; j < dirs.cols(); ++j)
      for (double r : {0.5, 1.0, 2.0}) probes.push_back(r * dirs.col(j));
  }
  const auto mc = estimate_delta_f_path(model, fv, cfg.n_values, cfg.reps, rng);
  Table t;
  t.header = {"experiment", "model", "function", "n", "h", "sup_bias", "delta_bound", "delta_bound_se", "total",
              "best", "mc_value", "mc_se"};
  for (std::size_t i = 0; i < cfg.n_values.size(); ++i) {
    const long n = cfg.n_values[i];
    const BandwidthChoice choice = optimize_bandwidth(f, model, n, cfg.grid, cfg.constants, probes);
    for (std::size_t j = 0; j < cfg.grid.size(); ++j) {
      const double h = cfg.grid[j];
      const double bias = sup_approx_error(f, {h, KernelKind::gaussian}, probes);
      const Estimate db = normball_delta_bound(fv, model, h, n, cfg.constants);
      t.add_row({txt("normball_bound"), txt(cfg.model), txt(cfg.function), num(n), num(h), num(bias), num(db.value),
                 num(db.err), num(choice.totals[j]), num(h == choice.h_star ? 1L : 0L), num(mc[i].delta),
                 num(mc[i].se)});
    }
  }
  return t;
}

Table norm_gap_table(const ExperimentConfig& cfg, const RngStream& rng) {
  const MultivariateModel model = multivariate_by_name(cfg.model);
  const auto gaps = expected_norm_gap_path(model, cfg.n_values, cfg.reps, rng);
  const auto dirs = bound_directions(model.dimension(), 8, rng.substream(0xFFFF));
  std::vector<NormGapBound> bounds;
  std::vector<std::pair<long, double>> ratios;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    bounds.push_back(expected_norm_gap_bound(model, cfg.n_values[i], cfg.constants, dirs));
    ratios.emplace_back(cfg.n_values[i], gaps[i].abs_delta / (bounds.back().moment_term / cfg.constants.C));
  }
  const auto fitted = fit_constants(ratios);
  Table t;
  t.header = {"experiment", "model", "n", "mc_value", "mc_se", "bound", "moment_term", "char_term", "l4_l2",
              "fitted_constant", "flags"};
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const auto& b = bounds[i];
    t.add_row({txt("norm_gap"), txt(cfg.model), num(cfg.n_values[i]), num(gaps[i].delta), num(gaps[i].se),
               num(b.total), num(b.moment_term), num(b.char_term), num(b.l4_l2), num(fitted.at(cfg.n_values[i])),
               txt(join_flags({b.vacuous ? "vacuous" : "", b.char_term > b.moment_term ? "char term dominates" : ""}))});
  }
  return t;
}

Table identities_table(const ExperimentConfig& cfg, bool& passed) {
  const auto ts = grid_or(cfg.grid, {-5.0, -2.0, -1.0, 0.0, 1.0, 2.0, 5.0});
  Table t;
  t.header = {"experiment", "identity", "t", "closed_form", "quadrature", "abs_err"};
  double worst = 0.0;
  const auto row = [&](const char* id, double x, double exact, double quad) {
    const double err = std::abs(exact - quad);
    worst = std::max(worst, err);
    t.add_row({txt("appendix_identities"), txt(id), num(x), num(exact), num(quad), num(err)});
  };
  for (double x : ts) {
    const AppendixE e = appendix_e_integrals(x);
    row("hermite_tail", x, -x * gauss_pdf(x), e.hermite_tail.value);
    row("kappa", x, kappa(x), e.kappa_quadrature.value);
  }
  const QuadratureSpec q{1e-12, 1e-12};
  for (int i = 0; i <= 80; ++i) {
    const double z = -20.0 + 0.5 * i;
    const std::complex<double> lhs = relu_complex_identity(z, q);
    const std::complex<double> rhs = std::exp(std::complex<double>(0.0, z)) - std::complex<double>(0.0, z) - 1.0;
    row("relu_complex_re", z, rhs.real(), lhs.real());
    row("relu_complex_im", z, rhs.imag(), lhs.imag());
  }
  passed = worst < 1e-9;
  return t;
}

Table dispatch(const ExperimentConfig& cfg, bool& passed) {
  passed = true;
  const RngStream rng{cfg.seed, static_cast<std::uint64_t>(cfg.experiment)};
  switch (cfg.experiment) {
    case Experiment::relu_delta_sweep: return relu_table(cfg, rng);
    case Experiment::edgeworth_sweep: return edgeworth_table(cfg, rng);
    case Experiment::zeta2: return zeta2_table(cfg, rng);
    case Experiment::ridge_reconstruct: return ridge_reconstruct_table(cfg);
    case Experiment::ridge_delta_bound: return ridge_bound_table(cfg, rng);
    case Experiment::normball_bound: return normball_table(cfg, rng);
    case Experiment::norm_gap: return norm_gap_table(cfg, rng);
    case Experiment::appendix_identities: return identities_table(cfg, passed);
  }
  throw UsageError("unknown experiment");
}

std::string hex(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

Table run_table(const ExperimentConfig& cfg) {
  cfg.validate();
  bool passed = true;
  return dispatch(cfg, passed);
}

RunOutput run(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  bool passed = true;
  const Table table = dispatch(cfg, passed);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::filesystem::create_directories(cfg.output_dir);
  const std::string stem(to_string(cfg.experiment));
  RunOutput out;
  out.checks_passed = passed;
  out.files.push_back(cfg.output_dir / (stem + ".csv"));
  write_csv(table, out.files.front());

  const std::string canonical = cfg.canonical();
  nlohmann::ordered_json m;
  m["experiment"] = stem;
  m["config_hash"] = "fnv1a64:" + hex(fnv1a64(canonical));
  m["config"] = canonical;
  m["version"] = CLTLAB_VERSION;
  m["versions"] = {{"cltlab", CLTLAB_VERSION},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"boost", BOOST_LIB_VERSION},
                   {"compiler", __VERSION__}};
  m["wall_time_seconds"] = wall;
  m["threads"] = worker_count();
  m["rows"] = table.rows.size();
  m["checks_passed"] = passed;
  m["outputs"] = nlohmann::json::array({out.files.front().filename().string()});
  out.manifest = cfg.output_dir / (stem + ".manifest.json");
  std::ofstream mf(out.manifest, std::ios::binary);
  if (!mf) throw std::runtime_error("cannot write " + out.manifest.string());
  mf << m.dump(2) << '\n';
  return out;
}

}  // namespace cltlab::cli
