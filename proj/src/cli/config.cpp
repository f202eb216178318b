#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <cmath>
#include <boost/property_tree/ptree.hpp>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cltlab/cli.hpp"
#include "cltlab/dist_zoo.hpp"
#include "cltlab/errors.hpp"

namespace cltlab::cli {

namespace {

constexpr std::pair<Experiment, std::string_view> kNames[] = {
    {Experiment::edgeworth_sweep, "edgeworth_sweep"},
    {Experiment::relu_delta_sweep, "relu_delta_sweep"},
    {Experiment::zeta2, "zeta2"},
    {Experiment::ridge_reconstruct, "ridge_reconstruct"},
    {Experiment::ridge_delta_bound, "ridge_delta_bound"},
    {Experiment::normball_bound, "normball_bound"},
    {Experiment::norm_gap, "norm_gap"},
    {Experiment::appendix_identities, "appendix_identities"},
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(std::string s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  // lists: commas and whitespace are interchangeable
  if (sep == ',') std::replace_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; }, ',');
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("config: '" + key + "' expects numbers, got '" + s + "'");
  }
  if (used != s.size()) throw UsageError("config: '" + key + "' expects numbers, got '" + s + "'");
  return v;
}

long parse_long(const std::string& key, const std::string& s) {
  const double v = parse_double(key, s);
  if (v != std::floor(v) || std::abs(v) > 9e15) throw UsageError("config: '" + key + "' expects integers, got '" + s + "'");
  return static_cast<long>(v);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::string_view to_string(Experiment e) {
  for (const auto& [k, v] : kNames)
    if (k == e) return v;
  return "unknown";
}

Experiment experiment_from_string(std::string_view name) {
  for (const auto& [k, v] : kNames)
    if (v == name) return k;
  throw UsageError("unknown experiment '" + std::string(name) + "'");
}

bool is_monte_carlo(Experiment e) {
  return e != Experiment::ridge_reconstruct && e != Experiment::appendix_identities;
}

void ExperimentConfig::validate() const {
  try {
    constants.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  const bool needs_n = experiment != Experiment::ridge_reconstruct && experiment != Experiment::appendix_identities;
  if (needs_n && n_values.empty()) throw UsageError("config: n_values must be nonempty");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 1) throw UsageError("config: n_values must be positive");
    if (i > 0 && n_values[i] <= n_values[i - 1]) throw UsageError("config: n_values must be strictly ascending");
  }
  if (is_monte_carlo(experiment) && reps < 10000) throw UsageError("config: reps must be >= 10000 for MC experiments");
  const bool needs_model = needs_n;
  if (needs_model) {
    if (model.empty()) throw UsageError("config: model is required");
    try {
      const bool multi = is_multivariate_name(model);
      const bool wants_multi = experiment == Experiment::ridge_delta_bound ||
                               experiment == Experiment::normball_bound || experiment == Experiment::norm_gap;
      if (multi) {
        (void)multivariate_by_name(model);
      } else {
        (void)univariate_by_name(model);
      }
      if (multi != wants_multi) {
        throw UsageError("config: experiment " + std::string(to_string(experiment)) + " needs a " +
                         (wants_multi ? "multivariate" : "univariate") + " model, got '" + model + "'");
      }
    } catch (const UnknownModelError& e) {
      throw UsageError(e.what());
    }
  }
  if (function != "gaussian" && function != "shifted") throw UsageError("config: function must be gaussian or shifted");
  if (experiment == Experiment::ridge_reconstruct && (dimension < 1 || dimension > 3))
    throw UsageError("config: ridge_reconstruct needs dimension in 1..3");
  for (const auto& p : points)
    if (p.size() != dimension) throw UsageError("config: every point must have `dimension` coordinates");
  if (experiment == Experiment::normball_bound) {
    if (grid.empty()) throw UsageError("config: normball_bound needs h_grid");
    for (double h : grid)
      if (!(h > 0.0)) throw UsageError("config: h_grid entries must be > 0");
  }
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << "experiment=" << to_string(experiment) << "\nmodel=" << model << "\nfunction=" << function
     << "\ndimension=" << dimension << "\nn_values=";
  for (long n : n_values) os << n << ',';
  os << "\ngrid=";
  for (double g : grid) os << fmt(g) << ',';
  os << "\npoints=";
  for (const auto& p : points) {
    for (Eigen::Index j = 0; j < p.size(); ++j) os << fmt(p(j)) << ' ';
    os << ';';
  }
  os << "\nreps=" << reps << "\nseed=" << seed << "\nC=" << fmt(constants.C) << "\nc=" << fmt(constants.c) << '\n';
  return os.str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ExperimentConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  const auto section = tree.get_child_optional("experiment");
  if (!section) throw UsageError("config: missing [experiment] section");
  static const std::vector<std::string> known = {"name", "model", "function", "dimension", "n_values", "t_grid",
                                                 "x_grid", "h_grid", "points", "reps", "seed", "output_dir"};
  for (const auto& [key, _] : *section) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw UsageError("config: unknown key '" + key + "'");
  }
  const auto get = [&](const std::string& key) { return trim(section->get<std::string>(key, "")); };

  ExperimentConfig cfg;
  const std::string name = get("name");
  if (name.empty()) throw UsageError("config: [experiment] name is required");
  cfg.experiment = experiment_from_string(name);
  cfg.model = get("model");
  if (!get("function").empty()) cfg.function = get("function");
  if (!get("dimension").empty()) cfg.dimension = static_cast<int>(parse_long("dimension", get("dimension")));
  for (const auto& s : split(get("n_values"), ',')) cfg.n_values.push_back(parse_long("n_values", s));
  int grids = 0;
  for (const char* key : {"t_grid", "x_grid", "h_grid"}) {
    const std::string v = get(key);
    if (v.empty()) continue;
    ++grids;
    for (const auto& s : split(v, ',')) cfg.grid.push_back(parse_double(key, s));
  }
  if (grids > 1) throw UsageError("config: give only one of t_grid, x_grid, h_grid");
  for (const auto& p : split(get("points"), ';')) {
    std::vector<double> coords;
    for (const auto& s : split(p, ' ')) coords.push_back(parse_double("points", s));
    cfg.points.emplace_back(Eigen::Map<Eigen::VectorXd>(coords.data(), static_cast<Eigen::Index>(coords.size())));
  }
  if (!get("reps").empty()) cfg.reps = parse_long("reps", get("reps"));
  if (!get("seed").empty()) {
    const long s = parse_long("seed", get("seed"));
    if (s < 0) throw UsageError("config: seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (const auto k = tree.get_child_optional("constants")) {
    for (const auto& [key, v] : *k) {
      if (key == "C") {
        cfg.constants.C = parse_double(key, trim(v.data()));
      } else if (key == "c") {
        cfg.constants.c = parse_double(key, trim(v.data()));
      } else {
        throw UsageError("config: unknown key '" + key + "' in [constants]");
      }
    }
  }
  if (!get("output_dir").empty()) {
    cfg.output_dir = get("output_dir");
  } else if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
    cfg.output_dir = env;
  } else {
    cfg.output_dir = "cltlab_out";
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config file " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

}  // namespace cltlab::cli
