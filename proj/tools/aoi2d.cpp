// aoi2d command line: run scenarios, validate configs, list presets.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "aoi2d/error.hpp"
#include "aoi2d/scenario.hpp"

namespace {

using aoi2d::Config;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw aoi2d::ConfigError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Loaded {
  Config config;
  std::optional<nlohmann::json> manifest;
  std::string preset;
};

// A config file, a manifest.json, or a preset with an optional overlay file.
Loaded load(const std::string& path, const std::string& preset) {
  Loaded l;
  l.preset = preset;
  if (!preset.empty()) l.config = Config::parse(aoi2d::preset_text(preset), "preset:" + preset);
  if (path.empty()) {
    if (preset.empty()) throw aoi2d::ConfigError("need a config file or --preset");
    return l;
  }
  const std::string text = read_file(path);
  const bool json = path.size() > 5 && path.substr(path.size() - 5) == ".json";
  if (json) {
    nlohmann::json m;
    try {
      m = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw aoi2d::ConfigError(path + ": " + e.what());
    }
    if (!m.contains("config")) throw aoi2d::ConfigError(path + ": manifest has no config", "config");
    l.config = Config::from_json(m["config"]);
    if (m.contains("preset")) l.preset = m["preset"].get<std::string>();
    l.manifest = m;
    return l;
  }
  const Config overlay = Config::parse(text, path);
  if (preset.empty()) return {overlay, std::nullopt, preset};
  for (const auto& [key, v] : overlay.values()) l.config.set(key, v);
  return l;
}

int report_config_error(const aoi2d::ConfigError& e) {
  nlohmann::json j{{"status", "config_error"}, {"message", e.what()}, {"key", e.key_path()}};
  std::cerr << e.what() << '\n';
  std::cout << j.dump() << '\n';
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-dimensional age of information toolkit"};
  app.require_subcommand(1);

  std::string config_path, preset, out_dir;
  long long seed = -1;
  int workers = 0;
  bool refine = false;
  auto* run = app.add_subcommand("run", "Run a scenario and write results");
  run->add_option("config", config_path, "Config file or manifest.json");
  run->add_option("--preset", preset, "Built-in scenario used as the base config");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Master seed")->check(CLI::NonNegativeNumber);
  run->add_option("--workers", workers, "Worker threads (AOI2D_WORKERS overrides)")->check(CLI::NonNegativeNumber);
  run->add_flag("--refine-min", refine, "Golden-section refinement of the sweep minimum");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("config", validate_path, "Config file")->required();

  std::string show;
  auto* presets = app.add_subcommand("presets", "List built-in scenarios");
  presets->add_option("--show", show, "Print the config text of one preset");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*presets) {
      if (!show.empty()) {
        std::cout << aoi2d::preset_text(show);
      } else {
        for (const auto& n : aoi2d::preset_names()) std::cout << n << '\n';
      }
      return 0;
    }
    if (*validate) {
      const Loaded l = load(validate_path, "");
      const aoi2d::ScenarioConfig s = aoi2d::scenario_from_config(l.config);
      std::cout << "ok: " << s.name << ", " << s.sweep_values.size() << " sweep points";
      if (!s.series_var.empty()) std::cout << " x " << s.series_values.size() << " series";
      std::cout << '\n';
      return 0;
    }

    const Loaded l = load(config_path, preset);
    aoi2d::ScenarioConfig s = aoi2d::scenario_from_config(l.config);
    s.preset = l.preset;
    aoi2d::RunOptions opt;
    opt.workers = workers;
    if (const char* env = std::getenv("AOI2D_WORKERS")) {
      try {
        opt.workers = std::stoi(env);
      } catch (const std::exception&) {
        throw aoi2d::ConfigError(std::string("AOI2D_WORKERS is not an integer: ") + env, "AOI2D_WORKERS");
      }
    }
    if (seed >= 0) {
      opt.seed = static_cast<std::uint64_t>(seed);
    } else if (l.manifest && l.manifest->contains("master_seed")) {
      opt.seed = (*l.manifest)["master_seed"].get<std::uint64_t>();
    }
    if (refine) {
      opt.refine_min = true;
    } else if (l.manifest && l.manifest->contains("refine_min")) {
      opt.refine_min = (*l.manifest)["refine_min"].get<bool>();
    }
    const aoi2d::ResultTable t = aoi2d::run_scenario(s, opt);
    const std::string dir = out_dir.empty() ? s.out_dir : out_dir;
    aoi2d::write_outputs(s, t, opt, dir);

    for (const auto& r : t.rows) {
      if (r.metric.find("min_mean_2d_aoi") == std::string::npos) continue;
      std::cout << r.metric;
      if (!r.series_var.empty()) std::cout << " " << r.series_var << "=" << r.series;
      std::cout << ": " << r.sweep_var << "=" << r.sweep << " value=" << r.analytic << '\n';
    }
    std::cout << t.rows.size() << " rows written to " << dir << '\n';
    if (t.n_failed_points == 0) return 0;

    nlohmann::json fail{{"status", "failed"}, {"n_failed_points", t.n_failed_points}};
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& r : t.rows)
      if (r.status.rfind("error", 0) == 0)
        pts.push_back({{"sweep", r.sweep}, {"series", r.series}, {"metric", r.metric}, {"reason", r.status}});
    fail["points"] = pts;
    std::cout << fail.dump() << '\n';
    return 2;
  } catch (const aoi2d::ConfigError& e) {
    return report_config_error(e);
  } catch (const std::exception& e) {
    nlohmann::json j{{"status", "error"}, {"message", e.what()}};
    std::cerr << e.what() << '\n';
    std::cout << j.dump() << '\n';
    return 1;
  }
}
