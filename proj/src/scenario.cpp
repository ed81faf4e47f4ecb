#include "aoi2d/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "aoi2d/calculus.hpp"
#include "aoi2d/error.hpp"
#include "aoi2d/parallel.hpp"
#include "aoi2d/rng.hpp"
#include "aoi2d/sim.hpp"
#include "aoi2d/stats.hpp"

namespace aoi2d {

namespace fs = std::filesystem;

std::string library_version() { return "0.1.0"; }

Kernel KernelSpec::build() const {
  Kernel k = Kernel::mixed(temporal, spatial, l_t, l_s, alpha, beta, sigma2);
  k.validate();
  return k;
}

namespace {

const std::set<std::string> kKnownKeys = {
    "name",
    "kernel.family", "kernel.temporal", "kernel.spatial", "kernel.temporal_family",
    "kernel.spatial_family", "kernel.l_t", "kernel.l_s",
    "kernel.alpha", "kernel.beta", "kernel.sigma2",
    "topology.type", "topology.d", "topology.area_side", "topology.s_select",
    "topology.capacity", "topology.sensor_count", "topology.poi", "topology.include_center",
    "topology.mu_center", "topology.mu",
    "channel.kind", "channel.rho", "channel.floor",
    "analysis.targets", "analysis.quantile", "analysis.y_grid", "analysis.y_max",
    "analysis.y_points", "analysis.tier_sets", "analysis.normalize",
    "sweep.variable", "sweep.values", "sweep.from", "sweep.to", "sweep.step", "sweep.series",
    "sweep.series_values", "sweep.refine_min",
    "sim.enabled", "sim.mode", "sim.n_slots", "sim.t_end", "sim.warmup", "sim.seed", "sim.seeds",
    "sim.predvar",
    "gp.horizon_T", "gp.noise_var", "gp.max_samples_per_sensor", "gp.jitter",
    "output.dir", "output.plotdata", "output.gnuplot",
};

const std::set<std::string> kSweepVars = {"d", "l_s", "l_t", "mu_center", "rho", "mu", "s_select",
                                          "noise_var"};

std::vector<int> parse_tier_set(const std::string& s, const std::string& key) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, '+')) {
    try {
      std::size_t used = 0;
      const int t = std::stoi(part, &used);
      if (used != part.size() || t < 1) throw std::invalid_argument(part);
      out.push_back(t);
    } catch (const std::exception&) {
      throw ConfigError("tier set '" + s + "' must look like \"1\" or \"1+2\"", key);
    }
  }
  if (out.empty()) throw ConfigError("empty tier set", key);
  return out;
}

std::string tier_set_name(const std::vector<int>& set) {
  std::string s;
  for (int t : set) s += (s.empty() ? "" : "+") + std::to_string(t);
  return s;
}

std::vector<double> sweep_range(const Config& c, const std::string& prefix) {
  if (c.has(prefix + ".values")) return c.numbers(prefix + ".values");
  if (!c.has(prefix + ".from")) return {};
  const double from = c.number(prefix + ".from");
  const double to = c.number(prefix + ".to");
  const double step = c.number(prefix + ".step", 1.0);
  if (!(step > 0) || to < from) throw ConfigError("need from <= to and step > 0", prefix + ".step");
  std::vector<double> v;
  const long n = static_cast<long>(std::floor((to - from) / step + 1e-9));
  for (long i = 0; i <= n; ++i) v.push_back(from + static_cast<double>(i) * step);
  return v;
}

}  // namespace

ScenarioConfig scenario_from_config(const Config& c) {
  c.check_known(kKnownKeys);
  ScenarioConfig s;
  s.source = c;
  s.name = c.string("name", s.name);

  // Kernel.
  const std::string fam = c.string("kernel.family", "exponential");
  try {
    s.kernel.temporal = family_from_string(
        c.string("kernel.temporal_family", c.string("kernel.temporal", fam)));
    s.kernel.spatial = family_from_string(
        c.string("kernel.spatial_family", c.string("kernel.spatial", fam)));
  } catch (const std::exception& e) {
    throw ConfigError(std::string(e.what()), "kernel.family");
  }
  s.kernel.l_t = c.number("kernel.l_t", s.kernel.l_t);
  s.kernel.l_s = c.number("kernel.l_s", s.kernel.l_s);
  s.kernel.alpha = c.number("kernel.alpha", s.kernel.alpha);
  s.kernel.beta = c.number("kernel.beta", s.kernel.beta);
  s.kernel.sigma2 = c.number("kernel.sigma2", s.kernel.sigma2);

  // Topology.
  const std::string topo = c.string("topology.type", "grid");
  if (topo == "grid") {
    s.topology = TopologyType::Grid;
  } else if (topo == "star") {
    s.topology = TopologyType::Star;
  } else if (topo == "single") {
    s.topology = TopologyType::Single;
  } else {
    throw ConfigError(c.where("topology.type") + ": unknown topology '" + topo + "'", "topology.type");
  }
  s.grid.d = s.star.d = c.number("topology.d", s.grid.d);
  if (s.topology == TopologyType::Star) s.star.d = c.number("topology.d", 0.0);
  s.grid.area_side = c.number("topology.area_side", s.grid.area_side);
  s.grid.s_select = static_cast<int>(c.integer("topology.s_select", s.grid.s_select));
  const double mu = c.number("topology.mu", c.number("topology.capacity", -1.0));
  if (mu > 0) {
    s.grid.capacity = mu;
    s.star.mu_total = mu;
    s.single_mu = mu;
  } else if (c.has("topology.mu") || c.has("topology.capacity")) {
    throw ConfigError(c.where("topology.mu") + ": service rate must be positive", "topology.mu");
  }
  const std::string count = c.string("topology.sensor_count", "cells");
  if (count == "cells") {
    s.grid.count = SensorCount::AreaCells;
  } else if (count == "lattice") {
    s.grid.count = SensorCount::LatticePoints;
  } else {
    throw ConfigError(c.where("topology.sensor_count") + ": expected \"cells\" or \"lattice\"",
                      "topology.sensor_count");
  }
  if (c.has("topology.poi")) {
    const auto p = c.numbers("topology.poi");
    if (p.size() != 2) throw ConfigError("poi must be [x, y]", "topology.poi");
    s.grid.poi = Position::of(p[0], p[1]);
  }
  s.star.include_center = c.boolean("topology.include_center", true);
  s.star.mu_center = c.number("topology.mu_center", 0.0);

  // Channel.
  const std::string kind = c.string("channel.kind", "mm1");
  if (kind == "mm1") {
    s.channel = ChannelKind::MM1;
  } else if (kind == "aloha") {
    s.channel = ChannelKind::SlottedAloha;
  } else {
    throw ConfigError(c.where("channel.kind") + ": expected \"mm1\" or \"aloha\"", "channel.kind");
  }
  s.rho = s.star.rho = c.number("channel.rho", s.rho);
  s.aloha_floor = c.boolean("channel.floor", true);

  // Analysis.
  const auto targets = c.has("analysis.targets") ? c.strings("analysis.targets")
                                                 : std::vector<std::string>{"mean"};
  s.want_mean = false;
  for (const auto& t : targets) {
    if (t == "mean") s.want_mean = true;
    else if (t == "quantile") s.want_quantile = true;
    else if (t == "ccdf") s.want_ccdf = true;
    else if (t == "predvar") s.want_predvar = true;
    else if (t == "tiers") s.want_tiers = true;
    else throw ConfigError(c.where("analysis.targets") + ": unknown target '" + t + "'", "analysis.targets");
  }
  s.quantile_p = c.number("analysis.quantile", s.quantile_p);
  if (c.has("analysis.y_grid")) {
    s.y_grid = c.numbers("analysis.y_grid");
  } else if (s.want_ccdf) {
    const double y_max = c.number("analysis.y_max", 100.0);
    const long n = c.integer("analysis.y_points", 20);
    if (n < 2 || !(y_max > 0)) throw ConfigError("need y_points >= 2 and y_max > 0", "analysis.y_points");
    for (long i = 0; i < n; ++i) s.y_grid.push_back(y_max * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  if (c.has("analysis.tier_sets")) {
    for (const auto& t : c.strings("analysis.tier_sets")) s.tier_sets.push_back(parse_tier_set(t, "analysis.tier_sets"));
  } else {
    s.tier_sets = {{1}, {2}, {3}, {1, 2}, {1, 2, 3}};
  }
  s.normalize = c.boolean("analysis.normalize", false);

  // Sweep.
  s.sweep_var = c.string("sweep.variable", "d");
  s.sweep_values = sweep_range(c, "sweep");
  if (s.sweep_values.empty()) {
    s.sweep_values = {s.topology == TopologyType::Star ? s.star.d : s.grid.d};
  }
  s.series_var = c.string("sweep.series", "");
  if (!s.series_var.empty()) s.series_values = c.numbers("sweep.series_values");
  s.refine_min = c.boolean("sweep.refine_min", false);

  // Simulation and GP.
  s.sim_enabled = c.boolean("sim.enabled", false);
  const std::string mode = c.string("sim.mode", "auto");
  if (mode == "shared_aloha") {
    s.sim_channel = "shared";
  } else if (mode == "auto" || mode == "independent_aloha" || mode == "mm1") {
    s.sim_channel = "independent";
  } else {
    throw ConfigError(c.where("sim.mode") + ": unknown sim mode '" + mode + "'", "sim.mode");
  }
  s.sim_slots = c.integer("sim.n_slots", s.sim_slots);
  s.sim_t_end = c.number("sim.t_end", s.sim_t_end);
  s.sim_warmup = c.number("sim.warmup", s.sim_warmup);
  s.sim_seeds = static_cast<int>(c.integer("sim.seeds", 1));
  const long seed = c.integer("sim.seed", 1);
  if (seed < 0) throw ConfigError(c.where("sim.seed") + ": seed must be >= 0", "sim.seed");
  s.seed = static_cast<std::uint64_t>(seed);
  s.predvar_sim = c.boolean("sim.predvar", false);
  s.predvar.horizon_T = c.number("gp.horizon_T", s.predvar.horizon_T);
  s.predvar.noise_var = c.number("gp.noise_var", 0.0);
  s.predvar.gp.max_samples_per_sensor =
      static_cast<int>(c.integer("gp.max_samples_per_sensor", s.predvar.gp.max_samples_per_sensor));
  s.predvar.gp.jitter = c.number("gp.jitter", s.predvar.gp.jitter);

  s.out_dir = c.string("output.dir", s.out_dir);
  s.plotdata = c.boolean("output.plotdata", true);
  s.gnuplot = c.boolean("output.gnuplot", false);

  s.validate();
  return s;
}

namespace {

// Applies one sweep/series coordinate to a copy of the scenario.
void apply_var(ScenarioConfig& s, const std::string& var, double v) {
  if (var == "d") {
    s.grid.d = v;
    s.star.d = v;
  } else if (var == "l_s") {
    s.kernel.l_s = v;
  } else if (var == "l_t") {
    s.kernel.l_t = v;
  } else if (var == "mu_center") {
    s.star.mu_center = v;
  } else if (var == "rho") {
    s.rho = v;
    s.star.rho = v;
  } else if (var == "mu") {
    s.grid.capacity = v;
    s.star.mu_total = v;
    s.single_mu = v;
  } else if (var == "s_select") {
    s.grid.s_select = static_cast<int>(std::lround(v));
  } else if (var == "noise_var") {
    s.predvar.noise_var = v;
  } else {
    throw ConfigError("unknown sweep variable '" + var + "'", "sweep.variable");
  }
}

std::string sweep_key(const std::string& var) {
  if (var == "l_s" || var == "l_t") return "kernel." + var;
  if (var == "rho") return "channel.rho";
  if (var == "noise_var") return "gp.noise_var";
  return "topology." + var;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (!kSweepVars.count(sweep_var))
    throw ConfigError("unknown sweep variable '" + sweep_var + "'", "sweep.variable");
  if (!series_var.empty()) {
    if (!kSweepVars.count(series_var))
      throw ConfigError("unknown series variable '" + series_var + "'", "sweep.series");
    if (series_var == sweep_var)
      throw ConfigError("series and sweep variable must differ", "sweep.series");
    if (series_values.empty()) throw ConfigError("series needs values", "sweep.series_values");
  }
  if (sweep_values.empty()) throw ConfigError("sweep needs values", "sweep.values");
  if (want_quantile && !(quantile_p > 0 && quantile_p < 1))
    throw ConfigError("quantile must lie in (0, 1)", "analysis.quantile");
  if (!want_mean && !want_quantile && !want_ccdf && !want_predvar && !want_tiers)
    throw ConfigError("at least one analysis target is required", "analysis.targets");
  if (topology != TopologyType::Grid && want_tiers)
    throw ConfigError("tier breakdown needs a grid topology", "analysis.targets");
  if (topology == TopologyType::Star && channel != ChannelKind::MM1)
    throw ConfigError("the star topology uses M|M|1 links", "channel.kind");
  if (topology == TopologyType::Single && channel != ChannelKind::MM1)
    throw ConfigError("the single-sensor topology uses an M|M|1 link", "channel.kind");
  if (predvar_sim && !(topology == TopologyType::Grid && channel == ChannelKind::SlottedAloha))
    throw ConfigError("all-samples simulation needs a grid with ALOHA links", "sim.predvar");
  if (sim_channel == "shared" && channel != ChannelKind::SlottedAloha)
    throw ConfigError("shared channel simulation needs ALOHA links", "sim.mode");
  if (sim_seeds < 1) throw ConfigError("need at least one seed", "sim.seeds");
  if (sim_slots < 1) throw ConfigError("n_slots must be positive", "sim.n_slots");
  if (!(sim_t_end > 0)) throw ConfigError("t_end must be positive", "sim.t_end");
  if (!(predvar.noise_var >= 0)) throw ConfigError("noise_var must be >= 0", "gp.noise_var");
  if (predvar_sim && !(std::isfinite(predvar.horizon_T) && predvar.horizon_T > 0))
    throw ConfigError("horizon_T must be finite and positive", "gp.horizon_T");
  if (predvar.gp.max_samples_per_sensor < 1)
    throw ConfigError("max_samples_per_sensor must be >= 1", "gp.max_samples_per_sensor");
  if (!(predvar.gp.jitter > 0 && predvar.gp.jitter <= predvar.gp.max_jitter))
    throw ConfigError("jitter must lie in (0, 1e-6]", "gp.jitter");
  if (normalize && std::find(sweep_values.begin(), sweep_values.end(), 0.0) == sweep_values.end())
    throw ConfigError("normalization divides by the sweep point 0, which is missing", "analysis.normalize");

  // Every sweep point must pass the module checks before anything runs.
  const std::vector<double> series = series_var.empty() ? std::vector<double>{0.0} : series_values;
  for (double sv : series) {
    for (double v : sweep_values) {
      ScenarioConfig p = *this;
      if (!series_var.empty()) apply_var(p, series_var, sv);
      apply_var(p, sweep_var, v);
      try {
        p.kernel.build();
      } catch (const DomainError& e) {
        throw ConfigError(e.what(), series_var == "l_s" || sweep_var == "l_s" ? "kernel.l_s" : "kernel");
      }
      if (!(p.rho > 0 && p.rho < 1)) throw ConfigError("rho must lie in (0, 1)", sweep_key("rho"));
      switch (topology) {
        case TopologyType::Grid: {
          if (sensors_in_area(p.grid) < p.grid.s_select)
            throw ConfigError("s_select=" + std::to_string(p.grid.s_select) + " exceeds the " +
                                  std::to_string(sensors_in_area(p.grid)) + " sensors in the area",
                              "topology.s_select");
          const int max_tier = static_cast<int>(std::ceil(std::sqrt(p.grid.s_select) / 2.0 - 1e-12));
          if (want_tiers)
            for (const auto& set : tier_sets)
              for (int t : set)
                if (t > max_tier)
                  throw ConfigError("tier " + std::to_string(t) + " needs more selected sensors",
                                    "analysis.tier_sets");
          break;
        }
        case TopologyType::Star: p.star.validate(); break;
        case TopologyType::Single:
          if (!(p.single_mu > 0)) throw ConfigError("service rate must be positive", "topology.mu");
          break;
      }
    }
  }
}

// ---------------------------------------------------------------------------

void ResultTable::write_csv(std::ostream& os) const {
  os << "sweep_var,sweep,series_var,series,metric,unit,y,analytic,simulated,sim_stderr,seed,status\n";
  auto num = [&](double v) {
    if (std::isnan(v)) return std::string();
    if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
    std::ostringstream s;
    s.precision(12);
    s << v;
    return s.str();
  };
  for (const ResultRow& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    os << r.sweep_var << ',' << num(r.sweep) << ',' << r.series_var << ','
       << (r.series_var.empty() ? "" : num(r.series)) << ',' << r.metric << ',' << r.unit << ','
       << num(r.y) << ',' << num(r.analytic) << ',' << num(r.simulated) << ',' << num(r.sim_stderr)
       << ',' << r.seed << ',' << status << '\n';
  }
}

std::vector<const ResultRow*> ResultTable::select(const std::string& metric, double series) const {
  std::vector<const ResultRow*> out;
  for (const ResultRow& r : rows)
    if (r.metric == metric && (r.series_var.empty() || r.series == series ||
                               (std::isinf(r.series) && std::isinf(series))))
      out.push_back(&r);
  return out;
}

std::pair<double, double> golden_section_min(const std::function<double(double)>& f, double lo,
                                             double hi, double tol) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  double x = (a + b) / 2.0, fx = f(x);
  // Endpoints win when the minimum sits on the boundary.
  for (double e : {lo, hi}) {
    const double fe = f(e);
    if (fe < fx) {
      x = e;
      fx = fe;
    }
  }
  return {x, fx};
}

namespace {

struct PointModel {
  std::vector<SensorLink> links;
  std::vector<GridSensor> grid_sensors;  // grid topology only
  Position target;
  Kernel kernel;
};

PointModel build_point(const ScenarioConfig& p) {
  PointModel m;
  m.kernel = p.kernel.build();
  switch (p.topology) {
    case TopologyType::Grid:
      m.grid_sensors = grid_layout(p.grid);
      m.links = grid_links(p.grid, p.channel, p.rho, p.aloha_floor);
      m.target = p.grid.point_of_interest();
      break;
    case TopologyType::Star:
      m.links = star_layout(p.star);
      m.target = star_target(p.star);
      break;
    case TopologyType::Single:
      m.links = {{Position::of(0.0, 0.0), ChannelModel::mm1_utilization(p.rho, p.single_mu), 0}};
      m.target = Position::of(0.0, 0.0);
      break;
  }
  return m;
}

const char* time_unit(const ScenarioConfig& p) {
  return p.channel == ChannelKind::SlottedAloha ? "slots" : "time";
}

double mean_2d(const ScenarioConfig& p) {
  const PointModel m = build_point(p);
  return mean_from_ccdf(ccdf_2d_min(m.links, m.kernel, m.target));
}

struct SimOutcome {
  Empirical2dAoi emp;
  std::vector<Estimate> per_seed_mean;
};

// Simulated minimal 2D-AoI for independent (or shared ALOHA) links.
SimOutcome simulate_point(const ScenarioConfig& p, const PointModel& m, std::uint64_t point_seed) {
  SimOutcome out;
  std::vector<Position> pos;
  for (const auto& l : m.links) pos.push_back(l.position);
  for (int r = 0; r < p.sim_seeds; ++r) {
    const std::uint64_t seed = derive_seed(point_seed, static_cast<std::uint64_t>(r));
    DeliveryLog log;
    std::vector<double> times;
    if (p.channel == ChannelKind::SlottedAloha) {
      const double q = m.links.front().channel.as_aloha()->q;
      const double warm = p.sim_warmup >= 0 ? p.sim_warmup : default_warmup(q);
      if (warm >= static_cast<double>(p.sim_slots))
        throw ConfigError("warmup " + std::to_string(warm) + " exceeds n_slots", "sim.n_slots");
      if (p.sim_channel == "shared") {
        const int n_st = std::max(static_cast<int>(m.links.size()),
                                  static_cast<int>(std::lround(sensor_count(p.grid))));
        log = simulate_shared_aloha(n_st, 1.0 / n_st, p.sim_slots, seed, false,
                                    static_cast<int>(m.links.size()));
      } else {
        log = simulate_independent_aloha(static_cast<int>(m.links.size()), q, p.sim_slots, seed);
      }
      times = slot_sample_times(static_cast<long>(std::ceil(warm)), p.sim_slots);
    } else {
      double min_rate = kInf;
      log.sensors.clear();
      for (std::size_t i = 0; i < m.links.size(); ++i) {
        const MM1Params& mm = *m.links[i].channel.as_mm1();
        min_rate = std::min(min_rate, mm.lambda);
        DeliveryLog one = simulate_mm1(mm.lambda, mm.mu, p.sim_t_end, derive_seed(seed, i));
        log.sensors.push_back(std::move(one.sensors[0]));
      }
      log.horizon = p.sim_t_end;
      log.seed = seed;
      const double warm = p.sim_warmup >= 0 ? p.sim_warmup : default_warmup(min_rate);
      if (warm >= p.sim_t_end)
        throw ConfigError("warmup " + std::to_string(warm) + " exceeds t_end", "sim.t_end");
      times = poisson_sample_times(1.0, warm, p.sim_t_end, derive_seed(seed, 0xFFFFu));
    }
    Empirical2dAoi e = empirical_2d_aoi(log, m.kernel, pos, m.target, times);
    out.per_seed_mean.push_back(e.mean());
    if (r == 0) {
      out.emp = std::move(e);
    } else {
      out.emp.values.insert(out.emp.values.end(), e.values.begin(), e.values.end());
      for (std::size_t i = 0; i < e.wins.size(); ++i) out.emp.wins[i] += e.wins[i];
      out.emp.n_infinite += e.n_infinite;
    }
  }
  return out;
}

// Combines independent per-seed estimates.
Estimate combine(const std::vector<Estimate>& v) {
  Estimate e;
  double s2 = 0.0;
  for (const auto& x : v) {
    e.value += x.value;
    s2 += x.stderr_ * x.stderr_;
  }
  const double n = static_cast<double>(v.size());
  e.value /= n;
  e.stderr_ = std::sqrt(s2) / n;
  return e;
}

std::vector<ResultRow> evaluate_point(const ScenarioConfig& cfg, double series, double sweep,
                                      std::uint64_t seed) {
  ScenarioConfig p = cfg;
  if (!cfg.series_var.empty()) apply_var(p, cfg.series_var, series);
  apply_var(p, cfg.sweep_var, sweep);

  std::vector<ResultRow> rows;
  auto row = [&](const std::string& metric, const std::string& unit) {
    ResultRow r;
    r.sweep_var = cfg.sweep_var;
    r.sweep = sweep;
    r.series_var = cfg.series_var;
    r.series = series;
    r.metric = metric;
    r.unit = unit;
    r.seed = seed;
    return r;
  };

  const PointModel m = build_point(p);
  const CcdfFn f = ccdf_2d_min(m.links, m.kernel, m.target);
  std::optional<SimOutcome> sim;
  if (p.sim_enabled) sim = simulate_point(p, m, seed);

  if (p.want_mean) {
    ResultRow r = row("mean_2d_aoi", time_unit(p));
    r.analytic = mean_from_ccdf(f);
    if (sim) {
      const Estimate e = combine(sim->per_seed_mean);
      r.simulated = e.value;
      r.sim_stderr = e.stderr_;
    }
    rows.push_back(r);
  }
  if (p.want_quantile) {
    std::ostringstream name;
    name << "quantile_" << p.quantile_p;
    ResultRow r = row(name.str(), time_unit(p));
    r.analytic = quantile_from_ccdf(f, p.quantile_p);
    if (sim) r.simulated = sim->emp.quantile(p.quantile_p);
    rows.push_back(r);
  }
  if (p.want_ccdf) {
    for (double y : p.y_grid) {
      ResultRow r = row("ccdf", "probability");
      r.y = y;
      r.analytic = f(y);
      if (sim) {
        const Estimate e = sim->emp.ccdf(y);
        r.simulated = e.value;
        r.sim_stderr = e.stderr_;
      }
      rows.push_back(r);
    }
  }
  if (sim) {
    for (std::size_t i = 0; i < sim->emp.wins.size(); ++i) {
      ResultRow r = row("win_fraction_sensor_" + std::to_string(m.links[i].index), "fraction");
      r.simulated = static_cast<double>(sim->emp.wins[i]) / static_cast<double>(std::max<std::size_t>(1, sim->emp.values.size()));
      rows.push_back(r);
    }
  }
  if (p.want_predvar) {
    const double eta = p.kernel.sigma2 / (p.kernel.sigma2 + p.predvar.noise_var);
    ResultRow best = row("predvar_best", "sigma2");
    best.analytic = mean_predvar(ccdf_predvar_min(m.links, m.kernel, m.target, eta));
    ResultRow all = row("predvar_all", "sigma2");
    if (p.predvar_sim) {
      std::vector<Estimate> b, a;
      for (int r = 0; r < p.sim_seeds; ++r) {
        PredVarSimConfig pc = p.predvar;
        pc.grid = p.grid;
        pc.kernel = m.kernel;
        pc.n_slots = p.sim_slots;
        pc.warmup = p.sim_warmup >= 0 ? static_cast<long>(p.sim_warmup) : -1;
        pc.seed = derive_seed(seed, static_cast<std::uint64_t>(r));
        pc.shared_channel = p.sim_channel == "shared";
        const PredVarSimResult res = mean_posterior_variance_sim(pc);
        b.push_back(res.best_sample);
        a.push_back(res.all_samples);
      }
      const Estimate eb = combine(b), ea = combine(a);
      best.simulated = eb.value;
      best.sim_stderr = eb.stderr_;
      all.simulated = ea.value;
      all.sim_stderr = ea.stderr_;
    }
    rows.push_back(best);
    if (p.predvar_sim) rows.push_back(all);
  }
  return rows;
}

struct Point {
  double series;
  double sweep;
};

std::vector<Point> points_of(const ScenarioConfig& cfg) {
  std::vector<Point> pts;
  const std::vector<double> series = cfg.series_var.empty() ? std::vector<double>{0.0} : cfg.series_values;
  for (double s : series)
    for (double v : cfg.sweep_values) pts.push_back({s, v});
  return pts;
}

std::vector<ResultRow> failed_rows(const ScenarioConfig& cfg, const Point& pt, std::uint64_t seed,
                                   const std::string& why) {
  ResultRow r;
  r.sweep_var = cfg.sweep_var;
  r.sweep = pt.sweep;
  r.series_var = cfg.series_var;
  r.series = pt.series;
  r.metric = "point";
  r.seed = seed;
  r.status = "error: " + why;
  return {r};
}

// Runs `fn` on every point, catching numeric failures per point.
template <class Fn>
ResultTable run_points(const ScenarioConfig& cfg, const RunOptions& opt, Fn fn) {
  const std::uint64_t master = opt.seed.value_or(cfg.seed);
  const std::vector<Point> pts = points_of(cfg);
  struct Out {
    std::vector<ResultRow> rows;
    bool failed = false;
  };
  auto task = [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(master, i);
    Out o;
    try {
      o.rows = fn(pts[i], seed);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      o.rows = failed_rows(cfg, pts[i], seed, e.what());
      o.failed = true;
    }
    return o;
  };
  const std::vector<Out> outs = parallel_map(pts.size(), task, opt.workers);
  ResultTable t;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    t.point_seeds.push_back(derive_seed(master, i));
    t.rows.insert(t.rows.end(), outs[i].rows.begin(), outs[i].rows.end());
    t.n_failed_points += outs[i].failed;
  }
  return t;
}

void add_minima(const ScenarioConfig& cfg, ResultTable& t, bool refine) {
  const std::vector<double> series = cfg.series_var.empty() ? std::vector<double>{0.0} : cfg.series_values;
  for (double s : series) {
    std::vector<const ResultRow*> rows = t.select("mean_2d_aoi", s);
    rows.erase(std::remove_if(rows.begin(), rows.end(), [](const ResultRow* r) { return !std::isfinite(r->analytic); }),
               rows.end());
    if (rows.empty()) continue;
    std::size_t arg = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i]->analytic < rows[arg]->analytic) arg = i;
    ResultRow g = *rows[arg];
    g.metric = "grid_min_mean_2d_aoi";
    g.simulated = g.sim_stderr = std::nan("");
    const double grid_arg = g.sweep;
    const double grid_min = g.analytic;
    std::vector<ResultRow> add{g};
    if (refine && rows.size() >= 2) {
      const double lo = rows[arg == 0 ? 0 : arg - 1]->sweep;
      const double hi = rows[std::min(arg + 1, rows.size() - 1)]->sweep;
      ResultRow r = g;
      r.metric = "refined_min_mean_2d_aoi";
      try {
        auto f = [&](double x) {
          ScenarioConfig p = cfg;
          if (!cfg.series_var.empty()) apply_var(p, cfg.series_var, s);
          apply_var(p, cfg.sweep_var, x);
          return mean_2d(p);
        };
        const auto [x, fx] = golden_section_min(f, lo, hi, 1e-3 * std::max(1.0, hi - lo));
        r.sweep = fx < grid_min ? x : grid_arg;
        r.analytic = std::min(fx, grid_min);
      } catch (const std::exception& e) {
        r.analytic = std::nan("");
        r.status = std::string("error: ") + e.what();
      }
      add.push_back(r);
    }
    t.rows.insert(t.rows.end(), add.begin(), add.end());
  }
}

void add_normalized(const ScenarioConfig& cfg, ResultTable& t) {
  std::vector<ResultRow> add;
  std::map<std::pair<std::string, double>, const ResultRow*> base;
  for (const ResultRow& r : t.rows)
    if (r.sweep == 0.0 && r.metric != "ccdf") base[{r.metric, r.series}] = &r;
  for (const ResultRow& r : t.rows) {
    if (r.metric != "mean_2d_aoi" && r.metric.rfind("quantile_", 0) != 0) continue;
    auto it = base.find({r.metric, r.series});
    if (it == base.end()) continue;
    ResultRow n = r;
    n.metric = r.metric + "_normalized";
    n.unit = "ratio";
    n.analytic = r.analytic / it->second->analytic;
    n.simulated = r.simulated / it->second->simulated;
    n.sim_stderr = std::nan("");
    add.push_back(n);
  }
  (void)cfg;
  t.rows.insert(t.rows.end(), add.begin(), add.end());
}

}  // namespace

ResultTable tier_breakdown(const ScenarioConfig& cfg, const RunOptions& opt) {
  if (cfg.topology != TopologyType::Grid) throw ConfigError("tier breakdown needs a grid topology", "topology.type");
  return run_points(cfg, opt, [&](const Point& pt, std::uint64_t seed) {
    ScenarioConfig p = cfg;
    if (!cfg.series_var.empty()) apply_var(p, cfg.series_var, pt.series);
    apply_var(p, cfg.sweep_var, pt.sweep);
    const PointModel m = build_point(p);
    std::vector<ResultRow> rows;
    auto row = [&](const std::string& metric) {
      ResultRow r;
      r.sweep_var = cfg.sweep_var;
      r.sweep = pt.sweep;
      r.series_var = cfg.series_var;
      r.series = pt.series;
      r.metric = metric;
      r.unit = time_unit(p);
      r.seed = seed;
      return r;
    };
    for (const auto& set : cfg.tier_sets) {
      std::vector<SensorLink> sub;
      for (std::size_t i = 0; i < m.links.size(); ++i)
        if (std::find(set.begin(), set.end(), m.grid_sensors[i].tier) != set.end()) sub.push_back(m.links[i]);
      ResultRow r = row("mean_tier_" + tier_set_name(set));
      r.analytic = mean_from_ccdf(ccdf_2d_min(sub, m.kernel, m.target));
      rows.push_back(r);
    }
    // AeD references at zero age: nearest tier-1 and nearest/farthest tier-2 sensors.
    for (int tier : {1, 2}) {
      double lo = kInf, hi = 0.0;
      for (const auto& g : m.grid_sensors) {
        if (g.tier != tier) continue;
        const double a = aed(m.kernel, g.position, m.target, 0.0);
        lo = std::min(lo, a);
        hi = std::max(hi, a);
      }
      if (!std::isfinite(lo)) continue;
      ResultRow a = row("aed_tier" + std::to_string(tier) + "_min");
      a.analytic = lo;
      rows.push_back(a);
      ResultRow b = row("aed_tier" + std::to_string(tier) + "_max");
      b.analytic = hi;
      rows.push_back(b);
    }
    return rows;
  });
}

ResultTable run_scenario(const ScenarioConfig& cfg, const RunOptions& opt) {
  cfg.validate();
  ResultTable t;
  const bool any_point_metric = cfg.want_mean || cfg.want_quantile || cfg.want_ccdf || cfg.want_predvar;
  if (any_point_metric) {
    t = run_points(cfg, opt, [&](const Point& pt, std::uint64_t seed) {
      return evaluate_point(cfg, pt.series, pt.sweep, seed);
    });
  }
  if (cfg.want_tiers) {
    ResultTable tiers = tier_breakdown(cfg, opt);
    if (!any_point_metric) {
      t = std::move(tiers);
    } else {
      t.rows.insert(t.rows.end(), tiers.rows.begin(), tiers.rows.end());
      t.n_failed_points += tiers.n_failed_points;
    }
  }
  if (cfg.want_mean) add_minima(cfg, t, opt.refine_min.value_or(cfg.refine_min));
  if (cfg.normalize) add_normalized(cfg, t);
  return t;
}

// ---------------------------------------------------------------------------

nlohmann::json make_manifest(const ScenarioConfig& cfg, const ResultTable& t, const RunOptions& opt) {
  nlohmann::json j;
  j["schema_version"] = t.schema_version;
  j["tool"] = "aoi2d";
  j["version"] = library_version();
  j["name"] = cfg.name;
  j["preset"] = cfg.preset;
  j["config"] = cfg.source.to_json();
  j["master_seed"] = opt.seed.value_or(cfg.seed);
  j["point_seeds"] = t.point_seeds;
  j["refine_min"] = opt.refine_min.value_or(cfg.refine_min);
  j["workers"] = resolve_workers(opt.workers);
  j["n_failed_points"] = t.n_failed_points;
  j["rng"] = "mt19937_64, uniforms from the top 53 bits, SplitMix64 child seeds";
  return j;
}

namespace {

std::string fmt_value(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream s;
  s << v;
  return s.str();
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os.precision(12);
  return os;
}

}  // namespace

std::vector<fs::path> emit_plotdata(const ScenarioConfig& cfg, const ResultTable& t,
                                    const fs::path& dir, bool gnuplot) {
  if (t.rows.empty()) throw std::runtime_error("emit_plotdata: empty result table");
  fs::create_directories(dir);
  std::vector<fs::path> written;
  const std::vector<double> series = cfg.series_var.empty() ? std::vector<double>{0.0} : cfg.series_values;

  // Scalar metrics over the sweep, one file per (metric, series).
  std::set<std::string> metrics;
  for (const ResultRow& r : t.rows)
    if (r.metric != "ccdf" && r.metric != "point" && r.metric.find("min_") == std::string::npos &&
        r.metric.rfind("win_fraction", 0) != 0)
      metrics.insert(r.metric);
  std::string plot;
  for (const std::string& metric : metrics) {
    for (double s : series) {
      const auto rows = t.select(metric, s);
      if (rows.empty()) continue;
      const std::string column = metric == "mean_2d_aoi" ? "mean_2d_aoi" : metric;
      std::string fname = metric;
      if (!cfg.series_var.empty()) fname += "_" + cfg.series_var + "_" + fmt_value(s);
      const fs::path path = dir / (fname + ".csv");
      std::ofstream os = open_out(path);
      const bool has_sim = std::any_of(rows.begin(), rows.end(), [](const ResultRow* r) { return !std::isnan(r->simulated); });
      os << cfg.sweep_var << ',' << column;
      if (has_sim) os << ",simulated,sim_stderr";
      os << '\n';
      for (const ResultRow* r : rows) {
        os << fmt_value(r->sweep) << ',' << (std::isnan(r->analytic) ? std::string() : fmt_value(r->analytic));
        if (has_sim) {
          os << ',' << (std::isnan(r->simulated) ? std::string() : fmt_value(r->simulated)) << ','
             << (std::isnan(r->sim_stderr) ? std::string() : fmt_value(r->sim_stderr));
        }
        os << '\n';
      }
      written.push_back(path);
      plot += (plot.empty() ? "plot " : ", \\\n     ") + ("'" + path.filename().string() + "' using 1:2 with lines title '" + fname + "'");
    }
  }

  // CCDFs, one file per (series, sweep point).
  std::map<std::pair<double, double>, std::vector<const ResultRow*>> ccdfs;
  for (const ResultRow& r : t.rows)
    if (r.metric == "ccdf") ccdfs[{r.series, r.sweep}].push_back(&r);
  for (const auto& [key, rows] : ccdfs) {
    std::string fname = "ccdf";
    if (!cfg.series_var.empty()) fname += "_" + cfg.series_var + "_" + fmt_value(key.first);
    fname += "_" + cfg.sweep_var + "_" + fmt_value(key.second);
    const fs::path path = dir / (fname + ".csv");
    std::ofstream os = open_out(path);
    os << "y,ccdf_analytic,ccdf_sim,sim_stderr\n";
    for (const ResultRow* r : rows) {
      os << fmt_value(r->y) << ',' << fmt_value(r->analytic) << ','
         << (std::isnan(r->simulated) ? std::string() : fmt_value(r->simulated)) << ','
         << (std::isnan(r->sim_stderr) ? std::string() : fmt_value(r->sim_stderr)) << '\n';
    }
    written.push_back(path);
  }

  if (gnuplot && !plot.empty()) {
    const fs::path path = dir / "plot.gp";
    std::ofstream os = open_out(path);
    os << "# columns: 1 = " << cfg.sweep_var << ", 2 = analytic value, 3 = simulated, 4 = stderr\n"
       << "set datafile separator ','\nset key autotitle columnhead\nset xlabel '" << cfg.sweep_var << "'\n"
       << plot << '\n';
    written.push_back(path);
  }
  return written;
}

void write_outputs(const ScenarioConfig& cfg, const ResultTable& t, const RunOptions& opt,
                   const fs::path& dir) {
  fs::create_directories(dir);
  {
    std::ofstream os = open_out(dir / "results.csv");
    t.write_csv(os);
  }
  std::vector<fs::path> files{dir / "results.csv", dir / "manifest.json"};
  if (cfg.plotdata && !t.rows.empty()) {
    const auto more = emit_plotdata(cfg, t, dir, cfg.gnuplot);
    files.insert(files.end(), more.begin(), more.end());
  }
  nlohmann::json m = make_manifest(cfg, t, opt);
  std::vector<std::string> names;
  for (const auto& f : files) names.push_back(f.filename().string());
  m["files"] = names;
  std::ofstream os = open_out(dir / "manifest.json");
  os << m.dump(2) << '\n';
}

}  // namespace aoi2d
