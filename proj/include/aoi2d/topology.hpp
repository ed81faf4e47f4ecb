// Sensor layouts and per-area capacity allocation.
#pragma once

#include <optional>
#include <vector>

#include "aoi2d/calculus.hpp"
#include "aoi2d/position.hpp"

namespace aoi2d {

/// How the number of sensors sharing an area's capacity follows from d.
enum class SensorCount {
  AreaCells,      // N = round((side / d)^2): one sensor per d x d cell
  LatticePoints,  // N = (side / d + 1)^2: lattice points of the closed area, continuous in d
};

struct GridSpec {
  double d = 50.0;
  double area_side = 300.0;
  int s_select = 16;
  double capacity = 10.0;  // total M|M|1 service rate per area
  SensorCount count = SensorCount::AreaCells;
  std::optional<Position> poi;  // defaults to the area center

  void validate() const;
  Position point_of_interest() const;
};

struct GridSensor {
  Position position;
  int tier = 0;
  double distance = 0.0;  // to the point of interest
  int index = 0;
};

/// Number of sensors per area that share its capacity.
double sensor_count(const GridSpec& spec);

/// Physical sensors of the lattice inside the closed area; s_select may not exceed it.
long sensors_in_area(const GridSpec& spec);

/// The s_select sensors nearest to the point of interest, nearest first.
/// Sensors sit on the lattice center + d (i + 1/2, j + 1/2) inside the closed area;
/// tier k holds nearest-ranks [(2k-2)^2, (2k)^2).
std::vector<GridSensor> grid_layout(const GridSpec& spec);

struct CapacitySplit {
  double n = 0.0;       // sensors per area
  double mu_i = 0.0;    // per-sensor service rate
  double lambda_i = 0.0;
  double q = 0.0;       // per-sensor ALOHA budget 1 / (N e)
};

CapacitySplit capacity_split(const GridSpec& spec, double rho = 0.53);

/// Links of the selected grid sensors, each with an independent channel of
/// the given kind parameterized by capacity_split.
std::vector<SensorLink> grid_links(const GridSpec& spec, ChannelKind kind, double rho = 0.53,
                                   bool floor_mode = true);

struct StarSpec {
  double d = 0.0;
  bool include_center = true;
  double mu_total = 1.0;
  double mu_center = 0.0;
  double rho = 0.53;

  void validate() const;
  double leaf_rate() const { return (mu_total - mu_center) / 4.0; }
};

/// Center sensor 0 at the origin and leaves 1..4 at distance d; the point of
/// interest is leaf 1. Sensors with zero allocated rate are omitted.
std::vector<SensorLink> star_layout(const StarSpec& spec);
Position star_target(const StarSpec& spec);

}  // namespace aoi2d
