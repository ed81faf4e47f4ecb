// Built-in scenarios. Each text is a complete config accepted by `aoi2d run`.
#include <map>

#include "aoi2d/error.hpp"
#include "aoi2d/scenario.hpp"

namespace aoi2d {

namespace {

const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> p = {
      {"fig5a", R"(name = "fig5a"
# Grid of M|M|1 links, per-area service rate 10, curves over the spatial length scale.
[kernel]
family = "exponential"
l_t = 128
l_s = 128
[topology]
type = "grid"
area_side = 300
s_select = 16
capacity = 10
sensor_count = "lattice"
[channel]
kind = "mm1"
rho = 0.53
[analysis]
targets = ["mean"]
[sweep]
variable = "d"
from = 1
to = 100
step = 1
series = "l_s"
series_values = [64, 128, 256, 512, inf]
[output]
dir = "out/fig5a"
)"},
      {"fig5_mu100", R"(name = "fig5_mu100"
[kernel]
family = "exponential"
l_t = 128
l_s = 128
[topology]
type = "grid"
s_select = 16
capacity = 100
sensor_count = "lattice"
[channel]
kind = "mm1"
[sweep]
variable = "d"
from = 1
to = 100
series = "l_s"
series_values = [64, 128, 256, 512, inf]
[output]
dir = "out/fig5_mu100"
)"},
      {"fig5_mu1000", R"(name = "fig5_mu1000"
[kernel]
family = "exponential"
l_t = 128
l_s = 128
[topology]
type = "grid"
s_select = 16
capacity = 1000
sensor_count = "lattice"
[channel]
kind = "mm1"
[sweep]
variable = "d"
from = 1
to = 100
series = "l_s"
series_values = [64, 128, 256, 512, inf]
[output]
dir = "out/fig5_mu1000"
)"},
      {"fig6_exp", R"(name = "fig6_exp"
# Independent slotted ALOHA links with budget 1 / (N e).
[kernel]
family = "exponential"
l_t = 128
l_s = 128
[topology]
type = "grid"
s_select = 16
sensor_count = "lattice"
[channel]
kind = "aloha"
[sweep]
variable = "d"
from = 1
to = 100
series = "l_s"
series_values = [64, 128, 256, 512, inf]
[output]
dir = "out/fig6_exp"
)"},
      {"fig6_se", R"(name = "fig6_se"
[kernel]
family = "squared_exponential"
l_t = 128
l_s = 128
[topology]
type = "grid"
s_select = 16
sensor_count = "lattice"
[channel]
kind = "aloha"
[sweep]
variable = "d"
from = 1
to = 100
series = "l_s"
series_values = [64, 128, 256, 512, inf]
[output]
dir = "out/fig6_se"
)"},
      {"fig6_shared", R"(name = "fig6_shared"
# One collision channel per area, N stations transmitting with p = 1 / N.
[kernel]
family = "exponential"
l_t = 128
l_s = 128
[topology]
type = "grid"
s_select = 16
sensor_count = "lattice"
[channel]
kind = "aloha"
[sweep]
variable = "d"
from = 10
to = 100
step = 10
series = "l_s"
series_values = [64, 128, 256, 512, inf]
[sim]
enabled = true
mode = "shared_aloha"
n_slots = 200000
seed = 2
[output]
dir = "out/fig6_shared"
)"},
      {"fig7_exp", R"(name = "fig7_exp"
[kernel]
family = "exponential"
l_t = 128
l_s = 128
[topology]
type = "grid"
s_select = 16
sensor_count = "lattice"
[channel]
kind = "aloha"
[analysis]
targets = ["predvar"]
[sweep]
variable = "d"
from = 1
to = 100
series = "l_s"
series_values = [64, 128, 256, 512, inf]
[output]
dir = "out/fig7_exp"
)"},
      {"fig7_se", R"(name = "fig7_se"
[kernel]
family = "squared_exponential"
l_t = 128
l_s = 128
[topology]
type = "grid"
s_select = 16
sensor_count = "lattice"
[channel]
kind = "aloha"
[analysis]
targets = ["predvar"]
[sweep]
variable = "d"
from = 1
to = 100
series = "l_s"
series_values = [64, 128, 256, 512, inf]
[output]
dir = "out/fig7_se"
)"},
      {"table1", R"(name = "table1"
# Best-sample (analytic) and all-samples (simulated GP) mean prediction variance at d = 40.
[kernel]
family = "exponential"
l_t = 128
[topology]
type = "grid"
d = 40
s_select = 16
sensor_count = "lattice"
[channel]
kind = "aloha"
[analysis]
targets = ["predvar"]
[sweep]
variable = "l_s"
values = [64, 128, 256, 512, inf]
[sim]
predvar = true
n_slots = 50000
seeds = 20
seed = 2024
[gp]
horizon_T = 1000
noise_var = 0
max_samples_per_sensor = 64
[output]
dir = "out/table1"
)"},
      {"star", R"(name = "star"
# Four leaves at distance d around a center sensor; AeD equals Euclidean distance.
[kernel]
family = "exponential"
l_t = 1
l_s = 1
[topology]
type = "star"
mu = 1
include_center = true
[channel]
kind = "mm1"
rho = 0.53
[analysis]
targets = ["mean", "quantile"]
quantile = 0.9
normalize = true
[sweep]
variable = "mu_center"
from = 0
to = 1
step = 0.01
series = "d"
series_values = [0, 5, 25, 50]
[output]
dir = "out/star"
)"},
      {"appendixE", R"(name = "appendixE"
# 36 selected sensors, contributions of tiers 1 to 3 on ALOHA links.
# Beyond d = 60 the area holds fewer than 36 sensors.
[kernel]
family = "exponential"
l_t = 128
l_s = 128
[topology]
type = "grid"
s_select = 36
sensor_count = "lattice"
[channel]
kind = "aloha"
[analysis]
targets = ["mean", "tiers"]
tier_sets = ["1", "2", "3", "1+2", "1+2+3"]
[sweep]
variable = "d"
from = 1
to = 60
[output]
dir = "out/appendixE"
)"},
      {"appendixE_mm1", R"(name = "appendixE_mm1"
[kernel]
family = "exponential"
l_t = 128
l_s = 128
[topology]
type = "grid"
s_select = 36
capacity = 10
sensor_count = "lattice"
[channel]
kind = "mm1"
[analysis]
targets = ["mean", "tiers"]
[sweep]
variable = "d"
from = 1
to = 60
[output]
dir = "out/appendixE_mm1"
)"},
      {"rho", R"(name = "rho"
# Mean AoI of one M|M|1 link with mu = 1 over the utilization.
[kernel]
family = "exponential"
l_t = 1
l_s = 1
[topology]
type = "single"
mu = 1
[channel]
kind = "mm1"
[sweep]
variable = "rho"
from = 0.05
to = 0.95
step = 0.01
refine_min = true
[output]
dir = "out/rho"
)"},
  };
  return p;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> v;
  for (const auto& [k, _] : presets()) v.push_back(k);
  return v;
}

std::string preset_text(const std::string& name) {
  auto it = presets().find(name);
  if (it == presets().end()) throw ConfigError("unknown preset '" + name + "'", "preset");
  return it->second;
}

ScenarioConfig load_preset(const std::string& name) {
  ScenarioConfig s = scenario_from_config(Config::parse(preset_text(name), "preset:" + name));
  s.preset = name;
  return s;
}

}  // namespace aoi2d
