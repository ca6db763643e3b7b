#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ccc/analysis.hpp"
#include "ccc/plant.hpp"

namespace ccc::experiment {

using Vector = Eigen::VectorXd;

enum class DisturbanceScenario { Uniform, Zero, Explicit };
enum class PlantChoice { Random, Reference };

struct ExperimentConfig {
  int n = 3;
  int runs = 1000;
  int horizon = 40;
  double eps = 0.1;
  DisturbanceScenario disturbance = DisturbanceScenario::Uniform;
  double half_width = 1.0;
  std::string disturbance_file;  // Explicit: CSV with columns w1..wn
  double x0_sigma = 1.0;
  std::optional<Vector> x0;      // overrides the gaussian draw
  PlantChoice plant = PlantChoice::Random;
  std::optional<Eigen::MatrixXd> a0;  // overrides the plant choice
  std::uint64_t seed = 1;
  int tau = 0;
  std::optional<double> mu;      // empty: mu*
  std::vector<double> percentiles = {1.0, 10.0, 50.0};
  int threads = 0;               // 0: hardware concurrency

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// Reads "key = value" lines; '#' starts a comment. Unknown keys throw.
[[nodiscard]] ExperimentConfig parse_config(std::istream& is, ExperimentConfig base = {});
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path,
                                           ExperimentConfig base = {});
/// Applies one key/value pair, as in a config file line.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);
/// Writes the resolved config in the format parse_config reads.
void write_config(std::ostream& os, const ExperimentConfig& cfg);

/// Scenario defaults: the single-run figure setup, the uniform batch and the
/// zero-disturbance batch.
[[nodiscard]] ExperimentConfig single_run_defaults();
[[nodiscard]] ExperimentConfig uniform_batch_defaults();
[[nodiscard]] ExperimentConfig zero_batch_defaults();

inline const std::vector<std::string> kSeriesColumns = {"xbvec", "ubvec",  "kappa",
                                                        "mkappa", "x2norm", "u2norm"};

/// Rows keyed by t; one value per entry of kSeriesColumns.
struct SeriesTable {
  std::vector<int> t;
  std::map<std::string, std::vector<double>> columns;

  [[nodiscard]] int rows() const { return static_cast<int>(t.size()); }
  [[nodiscard]] const std::vector<double>& column(const std::string& name) const;
};

void write_series(std::ostream& os, const SeriesTable& table);
[[nodiscard]] SeriesTable read_series(std::istream& is);

/// The ceil(p/100 * count)-th largest value. Throws for p outside (0, 100] or
/// an empty sample.
[[nodiscard]] double upper_percentile(std::vector<double> values, double p);

/// Per-step, per-column upper percentile across runs.
[[nodiscard]] SeriesTable aggregate(const std::vector<SeriesTable>& runs, double p);

/// Everything produced by one closed-loop run.
struct RunResult {
  plant::LinearPlant plant;
  controller::DataBank init;
  plant::Trajectory trajectory;
  analysis::RunAnalysis analysis;
  analysis::CertificationReport report;
  SeriesTable series;
};

/// The plant of run `run_index`: the config's a0, the reference plant, or a
/// seeded random draw.
[[nodiscard]] plant::LinearPlant resolve_plant(const ExperimentConfig& cfg, std::uint64_t run_index);

/// Draws plant, x0 and disturbances for run `run_index` and runs the loop.
[[nodiscard]] RunResult simulate_run(const ExperimentConfig& cfg, std::uint64_t run_index);

/// Series rows t = 0 .. T-1 from a run analysis.
[[nodiscard]] SeriesTable series_from(const analysis::RunAnalysis& run);

/// Header "t,x1..xn,u1..un,w1..wn"; the final row holds x_T only.
void write_trajectory(std::ostream& os, const plant::Trajectory& traj);

/// Reads a trajectory written by write_trajectory (or any record with x and u
/// columns) and replays the controller from `init` to recover the LP
/// coefficients. Missing w columns are reconstructed as x_{t+1} - A0 x_t - u_t.
[[nodiscard]] plant::Trajectory read_trajectory(std::istream& is,
                                                const controller::DataBank& init,
                                                const Eigen::MatrixXd& a0);

/// Disturbance sequence from a CSV with columns w1..wn.
[[nodiscard]] std::vector<Vector> read_disturbances(const std::filesystem::path& path, int n);

struct BatchSummary {
  int runs = 0;
  std::map<std::string, double> pass_fraction;
  double median_settling_time = 0.0;
  std::map<double, SeriesTable> percentile_tables;
};

/// Writes trajectory.csv, series.csv, report.txt, report.csv and config.txt.
RunResult run_single(const ExperimentConfig& cfg, const std::filesystem::path& out);

/// Writes percentile_<p>.csv per percentile, summary.txt and config.txt.
BatchSummary run_batch(const ExperimentConfig& cfg, const std::filesystem::path& out);
/// Same without touching the file system.
[[nodiscard]] BatchSummary run_batch(const ExperimentConfig& cfg);

/// Uniform and zero-disturbance batches plus the single figure run, in
/// subdirectories uniform/, zero/ and single/.
void reproduce_figures(std::uint64_t seed, const std::filesystem::path& out, int runs = 1000,
                       int threads = 0);

struct PackingDemoResult {
  double kappa = 0.0;
  double mu = 0.0;
  double delta = 0.0;
  int candidates = 0;
  int packed = 0;
  double bound = 0.0;
  analysis::VolumeSandwich volume;
};

/// Greedy (delta; B)-separated packing of random points on the sphere
/// ||p||_W = delta/mu in the plane, with B the unit diamond and W a random set.
[[nodiscard]] PackingDemoResult packing_demo(std::uint64_t seed, int candidates, int samples);
void write_packing_demo(std::ostream& os, const PackingDemoResult& r);

}  // namespace ccc::experiment
