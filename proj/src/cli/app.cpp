#include <CLI11.hpp>
#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>

#include "cltlab/cli.hpp"
#include "cltlab/dist_zoo.hpp"
#include "cltlab/errors.hpp"
#include "cltlab/normball.hpp"
#include "cltlab/relu_delta.hpp"
#include "cltlab/ridge_repr.hpp"
#include "cltlab/special_functions.hpp"

namespace cltlab::cli {

std::vector<SelfTestLine> selftest() {
  std::vector<SelfTestLine> out;
  {
    double worst_h = 0.0, worst_k = 0.0;
    for (double t : {-5.0, -2.0, -1.0, 0.0, 1.0, 2.0, 5.0}) {
      const AppendixE e = appendix_e_integrals(t);
      worst_h = std::max(worst_h, std::abs(e.hermite_tail.value + t * gauss_pdf(t)));
      worst_k = std::max(worst_k, std::abs(e.kappa_quadrature.value - kappa(t)));
    }
    out.push_back({"E", "hermite tail = -t phi(t)", worst_h, 1e-9, worst_h < 1e-9});
    out.push_back({"E", "kappa closed form", worst_k, 1e-9, worst_k < 1e-9});
  }
  {
    double worst = 0.0;
    bool ineq = true;
    for (int i = 0; i <= 80; ++i) {
      const double z = -20.0 + 0.5 * i;
      const std::complex<double> lhs = relu_complex_identity(z, QuadratureSpec{1e-12, 1e-12});
      const std::complex<double> rhs = std::exp(std::complex<double>(0.0, z)) - std::complex<double>(0.0, z) - 1.0;
      worst = std::max(worst, std::abs(lhs - rhs));
      ineq = ineq && std::abs(rhs) <= std::min(2.0 * std::abs(z), 0.5 * z * z) + 1e-12;
    }
    out.push_back({"C", "ReLU complex identity", worst, 1e-9, worst < 1e-9});
    out.push_back({"C", "|e^{iz} - iz - 1| <= min(2|z|, z^2/2)", 0.0, 0.0, ineq});
  }
  {
    double worst = 0.0;
    bool dominated = true;
    for (double y : {0.5, 1.0, 2.0})
      for (double h : {0.5, 1.0, 2.0}) {
        const HolderIntegrals b = holder_t_integrals(y, h);
        const HolderQuadrature q = holder_t_quadrature(y, h, QuadratureSpec{1e-13, 1e-13});
        worst = std::max(worst, std::abs(b.i2_exact - q.indicator_inside.value));
        dominated = dominated && q.weighted_inside.value <= b.i1_bound && q.weighted_outside.value <= b.i3_bound;
      }
    out.push_back({"B", "indicator t-integral exact", worst, 1e-10, worst < 1e-10});
    out.push_back({"B", "Hoelder bounds dominate quadrature", 0.0, 0.0, dominated});
  }
  return out;
}

namespace {

int guarded(const std::function<int()>& body, bool mc) {
  try {
    return body();
  } catch (const UsageError& e) {
    std::cerr << "cltlab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnknownModelError& e) {
    std::cerr << "cltlab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    std::cerr << "cltlab: numerical failure: " << e.what() << '\n';
    return mc ? kExitMcFailure : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "cltlab: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cltlab: Edgeworth / ridge-function CLT experiments"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "run one experiment described by a config file");
  run_cmd->add_option("config", config_path, "INI config file")->required();

  std::string csv_path, kind = "convergence_loglog";
  auto* plot_cmd = app.add_subcommand("plot", "render an SVG from a result CSV");
  plot_cmd->add_option("csv", csv_path, "CSV written by `run`")->required();
  plot_cmd->add_option("--kind", kind, "convergence_loglog | t_profile | bound_vs_mc");

  auto* list_cmd = app.add_subcommand("list-models", "print the model catalog");
  auto* self_cmd = app.add_subcommand("selftest", "check the closed-form integral identities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (run_cmd->parsed()) {
    bool mc = true;
    return guarded(
        [&] {
          const ExperimentConfig cfg = load_config(config_path);
          mc = is_monte_carlo(cfg.experiment);
          const RunOutput r = run(cfg);
          for (const auto& f : r.files) std::cout << f.string() << '\n';
          std::cout << r.manifest.string() << '\n';
          return r.checks_passed ? kExitOk : kExitFailure;
        },
        mc);
  }
  if (plot_cmd->parsed()) {
    return guarded(
        [&] {
          std::cout << plot(csv_path, plot_kind_from_string(kind)).string() << '\n';
          return kExitOk;
        },
        false);
  }
  if (list_cmd->parsed()) {
    for (const auto& [name, desc] : catalog_listing()) std::printf("%-20s %s\n", name.c_str(), desc.c_str());
    return kExitOk;
  }
  if (self_cmd->parsed()) {
    return guarded(
        [] {
          bool all = true;
          for (const auto& l : selftest()) {
            std::printf("%s  [%s] %-40s worst %.3g (tol %.0e)\n", l.pass ? "PASS" : "FAIL", l.suite.c_str(),
                        l.name.c_str(), l.worst, l.tolerance);
            all = all && l.pass;
          }
          return all ? kExitOk : kExitFailure;
        },
        false);
  }
  return kExitUsage;
}

}  // namespace cltlab::cli
