#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cltlab/edgeworth.hpp"

namespace cltlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;   // a check or computation did not pass
inline constexpr int kExitUsage = 2;     // unknown experiment/model, bad config, malformed CSV
inline constexpr int kExitMcFailure = 3;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "CLTLAB_OUTPUT_DIR";

/// A usage-level problem; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Experiment {
  edgeworth_sweep,
  relu_delta_sweep,
  zeta2,
  ridge_reconstruct,
  ridge_delta_bound,
  normball_bound,
  norm_gap,
  appendix_identities,
};

std::string_view to_string(Experiment e);
/// Throws UsageError on an unknown name.
Experiment experiment_from_string(std::string_view name);
bool is_monte_carlo(Experiment e);

struct ExperimentConfig {
  Experiment experiment = Experiment::appendix_identities;
  std::string model;                  // catalog name; empty where unused
  std::string function = "gaussian";  // gaussian | shifted (ridge/normball experiments)
  int dimension = 0;                  // ridge_reconstruct only
  std::vector<long> n_values;
  std::vector<double> grid;           // t or x (scalar experiments), h for normball_bound
  std::vector<Eigen::VectorXd> points;  // vector grid (ridge_reconstruct)
  long reps = 0;
  std::uint64_t seed = 1;
  BoundConstants constants;
  std::filesystem::path output_dir;

  /// Throws UsageError.
  void validate() const;
  /// Canonical key = value text; the hash is taken over it.
  std::string canonical() const;
};

/// Reads the INI-style file ([experiment] and optional [constants] sections).
/// output_dir falls back to $CLTLAB_OUTPUT_DIR, then ./cltlab_out.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text);

std::uint64_t fnv1a64(std::string_view bytes);

/// A table of cells; NaN and infinities are written as empty cells.
struct Table {
  std::vector<std::string> header;
  struct Cell {
    std::optional<double> number;
    std::string text;
    bool is_text = false;
  };
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};
Table::Cell num(double v);
Table::Cell num(long v);
Table::Cell txt(std::string s);

/// %.12g, comma-separated, header row, '\n' line ends.
std::string format_csv(const Table& t);
void write_csv(const Table& t, const std::filesystem::path& path);
/// Throws UsageError for a malformed file (no header, ragged rows, quotes).
Table read_csv(const std::filesystem::path& path);

struct RunOutput {
  std::vector<std::filesystem::path> files;
  std::filesystem::path manifest;
  bool checks_passed = true;  // only appendix_identities carries checks
};

/// Runs one experiment and writes <experiment>.csv and <experiment>.manifest.json.
RunOutput run(const ExperimentConfig& cfg);
/// The table without touching the filesystem.
Table run_table(const ExperimentConfig& cfg);

enum class PlotKind { convergence_loglog, t_profile, bound_vs_mc };
PlotKind plot_kind_from_string(std::string_view s);
std::string render_svg(const Table& t, PlotKind kind);
/// Writes <csv stem>.<kind>.svg next to the CSV and returns its path.
std::filesystem::path plot(const std::filesystem::path& csv, PlotKind kind);

/// Least-squares slope of log|y| on log x over finite positive points.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct SelfTestLine {
  std::string suite;
  std::string name;
  double worst = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};
std::vector<SelfTestLine> selftest();

int main(int argc, char** argv);

}  // namespace cltlab::cli
