#include "aoi2d/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "aoi2d/error.hpp"

namespace aoi2d {

void GridSpec::validate() const {
  if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("grid: d must be > 0", "topology.d");
  if (!(area_side > 0.0)) throw ConfigError("grid: area_side must be > 0", "topology.area_side");
  if (s_select < 1) throw ConfigError("grid: s_select must be >= 1", "topology.s_select");
  if (!(capacity > 0.0)) throw ConfigError("grid: capacity must be > 0", "topology.capacity");
  if (poi && poi->dim() != 2) throw ConfigError("grid: point of interest must be 2-D", "topology.poi");
}

Position GridSpec::point_of_interest() const {
  return poi ? *poi : Position::of(0.5 * area_side, 0.5 * area_side);
}

double sensor_count(const GridSpec& spec) {
  spec.validate();
  const double r = spec.area_side / spec.d;
  if (spec.count == SensorCount::LatticePoints) return (r + 1.0) * (r + 1.0);
  return std::max(1.0, std::round(r * r));
}

namespace {

// Lattice coordinates c + (i + 1/2) d of one axis that fall inside [0, side].
std::vector<double> axis_coords(const GridSpec& spec) {
  const double c = 0.5 * spec.area_side;
  const double eps = 1e-9 * spec.area_side;
  const int k = static_cast<int>(std::ceil(spec.area_side / spec.d)) + 1;
  std::vector<double> v;
  for (int i = -k; i < k; ++i) {
    const double x = c + (i + 0.5) * spec.d;
    if (x >= -eps && x <= spec.area_side + eps) v.push_back(x);
  }
  return v;
}

}  // namespace

long sensors_in_area(const GridSpec& spec) {
  spec.validate();
  const auto n = static_cast<long>(axis_coords(spec).size());
  return n * n;
}

std::vector<GridSensor> grid_layout(const GridSpec& spec) {
  spec.validate();
  const Position poi = spec.point_of_interest();
  // Only sensors of the closed area are candidates.
  const std::vector<double> xs = axis_coords(spec);
  std::vector<GridSensor> all;
  all.reserve(xs.size() * xs.size());
  for (double x : xs)
    for (double y : xs) {
      GridSensor s;
      s.position = Position::of(x, y);
      s.distance = distance(s.position, poi);
      all.push_back(s);
    }
  if (static_cast<std::size_t>(spec.s_select) > all.size()) {
    std::ostringstream os;
    os << "grid: s_select=" << spec.s_select << " exceeds the " << all.size()
       << " sensors in the area";
    throw ConfigError(os.str(), "topology.s_select");
  }
  std::sort(all.begin(), all.end(), [](const GridSensor& a, const GridSensor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.position[1] != b.position[1]) return a.position[1] < b.position[1];
    return a.position[0] < b.position[0];
  });
  all.resize(static_cast<std::size_t>(spec.s_select));
  for (std::size_t r = 0; r < all.size(); ++r) {
    all[r].index = static_cast<int>(r);
    int tier = 1;
    while (static_cast<std::size_t>(4 * tier * tier) <= r) ++tier;
    all[r].tier = tier;
  }
  return all;
}

CapacitySplit capacity_split(const GridSpec& spec, double rho) {
  CapacitySplit s;
  s.n = sensor_count(spec);
  s.mu_i = spec.capacity / s.n;
  s.lambda_i = rho * s.mu_i;
  s.q = 1.0 / (std::max(s.n, 1.0) * std::numbers::e);
  return s;
}

std::vector<SensorLink> grid_links(const GridSpec& spec, ChannelKind kind, double rho,
                                   bool floor_mode) {
  const auto split = capacity_split(spec, rho);
  std::vector<SensorLink> links;
  for (const auto& s : grid_layout(spec)) {
    SensorLink l;
    l.position = s.position;
    l.index = s.index;
    switch (kind) {
      case ChannelKind::MM1: l.channel = ChannelModel::mm1(split.lambda_i, split.mu_i); break;
      case ChannelKind::SlottedAloha: l.channel = ChannelModel::aloha(split.q, floor_mode); break;
      case ChannelKind::Empirical:
        throw ConfigError("grid: empirical channels are attached by the simulator",
                          "channel.kind");
    }
    links.push_back(std::move(l));
  }
  return links;
}

void StarSpec::validate() const {
  if (!(d >= 0.0)) throw ConfigError("star: d must be >= 0", "topology.d");
  if (!(mu_total > 0.0)) throw ConfigError("star: mu_total must be > 0", "topology.capacity");
  if (mu_center < 0.0 || mu_center > mu_total)
    throw ConfigError("star: mu_center must lie in [0, mu_total]", "topology.mu_center");
  if (!include_center && mu_center != 0.0)
    throw ConfigError("star: mu_center must be 0 without a center sensor", "topology.mu_center");
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("star: rho must lie in (0, 1)", "channel.rho");
}

Position star_target(const StarSpec& spec) { return Position::of(spec.d, 0.0); }

std::vector<SensorLink> star_layout(const StarSpec& spec) {
  spec.validate();
  std::vector<SensorLink> links;
  if (spec.include_center && spec.mu_center > 0.0)
    links.push_back({Position::of(0.0, 0.0), ChannelModel::mm1_utilization(spec.rho, spec.mu_center), 0});
  const double leaf = spec.leaf_rate();
  if (leaf > 0.0) {
    const Position pos[4] = {Position::of(spec.d, 0.0), Position::of(0.0, spec.d),
                             Position::of(-spec.d, 0.0), Position::of(0.0, -spec.d)};
    for (int i = 0; i < 4; ++i)
      links.push_back({pos[i], ChannelModel::mm1_utilization(spec.rho, leaf), i + 1});
  }
  return links;
}

}  // namespace aoi2d
