// Scenario orchestration: config -> sweep -> ResultTable -> files.
#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <ostream>
#include <optional>
#include <string>
#include <vector>

#include "aoi2d/config.hpp"
#include "aoi2d/gp.hpp"
#include "aoi2d/kernel.hpp"
#include "aoi2d/topology.hpp"

namespace aoi2d {

inline constexpr int kResultSchemaVersion = 1;
std::string library_version();

enum class TopologyType { Grid, Star, Single };

struct KernelSpec {
  Family temporal = Family::Exponential;
  Family spatial = Family::Exponential;
  double l_t = 128.0;
  double l_s = 128.0;
  double alpha = 1.0;
  double beta = 1.0;
  double sigma2 = 1.0;

  Kernel build() const;
};

struct ScenarioConfig {
  std::string name = "scenario";
  KernelSpec kernel;

  TopologyType topology = TopologyType::Grid;
  GridSpec grid;
  StarSpec star;
  double single_mu = 1.0;

  ChannelKind channel = ChannelKind::MM1;
  double rho = 0.53;
  bool aloha_floor = true;

  // Analysis targets.
  bool want_mean = true;
  bool want_quantile = false;
  double quantile_p = 0.9;
  bool want_ccdf = false;
  std::vector<double> y_grid;
  bool want_predvar = false;
  bool want_tiers = false;
  std::vector<std::vector<int>> tier_sets;  // default {1},{2},{3},{1,2},{1,2,3}
  bool normalize = false;                  // divide by the value at sweep = 0 of each series

  // Sweep: one variable, plus an optional series (curve family) variable.
  std::string sweep_var = "d";
  std::vector<double> sweep_values;
  std::string series_var;
  std::vector<double> series_values;
  bool refine_min = false;

  // Simulation.
  bool sim_enabled = false;
  std::string sim_channel = "independent";  // or "shared"
  long sim_slots = 200000;
  double sim_t_end = 2e5;
  double sim_warmup = -1.0;
  int sim_seeds = 1;
  std::uint64_t seed = 1;

  PredVarSimConfig predvar;  // horizon_T, noise_var, gp options
  bool predvar_sim = false;

  std::string out_dir = "out";
  bool plotdata = true;
  bool gnuplot = false;

  std::string preset;  // name when built from a preset
  Config source;       // parsed config, echoed into the manifest

  /// Throws ConfigError with the key path of the first invalid entry.
  void validate() const;
};

/// Builds and validates a scenario from a parsed config.
ScenarioConfig scenario_from_config(const Config& c);

struct ResultRow {
  std::string sweep_var;
  double sweep = 0.0;
  std::string series_var;
  double series = 0.0;
  std::string metric;
  std::string unit;
  double y = std::nan("");  // CCDF abscissa when metric == "ccdf"
  double analytic = std::nan("");
  double simulated = std::nan("");
  double sim_stderr = std::nan("");
  std::string status = "ok";
  std::uint64_t seed = 0;
};

struct ResultTable {
  int schema_version = kResultSchemaVersion;
  std::vector<ResultRow> rows;
  std::vector<std::uint64_t> point_seeds;
  int n_failed_points = 0;

  void write_csv(std::ostream& os) const;
  std::vector<const ResultRow*> select(const std::string& metric, double series) const;
};

struct RunOptions {
  int workers = 0;
  std::optional<std::uint64_t> seed;  // overrides the config seed
  std::optional<bool> refine_min;
};

ResultTable run_scenario(const ScenarioConfig& cfg, const RunOptions& opt = {});

/// Tier-restricted minima for grid scenarios; rows per tier set and sweep point.
ResultTable tier_breakdown(const ScenarioConfig& cfg, const RunOptions& opt = {});

/// Golden-section refinement of the minimum of a unimodal f on [lo, hi].
std::pair<double, double> golden_section_min(const std::function<double(double)>& f, double lo,
                                             double hi, double tol = 1e-4);

/// Writes results.csv and manifest.json into `dir`, plus plot data when enabled.
void write_outputs(const ScenarioConfig& cfg, const ResultTable& t, const RunOptions& opt,
                   const std::filesystem::path& dir);

/// Per-curve CSV files into `dir`; returns the paths written.
std::vector<std::filesystem::path> emit_plotdata(const ScenarioConfig& cfg, const ResultTable& t,
                                                 const std::filesystem::path& dir, bool gnuplot);

nlohmann::json make_manifest(const ScenarioConfig& cfg, const ResultTable& t, const RunOptions& opt);

/// Built-in scenario texts.
std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);
ScenarioConfig load_preset(const std::string& name);

}  // namespace aoi2d
