// AoI CCDF models of the links between sensors and the monitor.
#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "aoi2d/constants.hpp"
#include "aoi2d/error.hpp"

namespace aoi2d {

/// P[AoI > y] of an FCFS M|M|1 queue. Clamped to [0, 1].
double ccdf_mm1(double lambda, double mu, double y);

/// P[AoI > y] of a slotted ALOHA link with per-slot success probability q.
/// floor_mode: (1-q)^floor(y); otherwise the continuous (1-q)^y.
double ccdf_aloha(double q, double y, bool floor_mode = true);

/// Tail bound 3 exp(-mu y / 2) for lambda = mu / 2, valid for y >= 2 ln 3 / mu.
double mm1_tail_bound(double mu, double y);

/// Two-sensor product of the tail bounds: 9 exp(mu2 aed / 2) exp(-(mu1 + mu2) y / 2).
double two_sensor_tail_bound(double mu1, double mu2, double aed, double y);

/// Service rate of the sensor at the point of interest such that the two-sensor
/// tail bound at y_target equals epsilon, given a helper sensor (mu2, aed).
double provision_rate(double y_target, double epsilon, double mu2, double aed);

/// Per-station success budget q = 1 / (N e) under the ALOHA capacity limit.
double aloha_budget(double n_stations);

struct MM1Params {
  double lambda;
  double mu;
};

struct AlohaParams {
  double q;
  bool floor_mode = true;
};

/// Right-continuous step CCDF tabulated at its jump points.
struct EmpiricalTable {
  std::vector<double> knots;   // strictly increasing
  std::vector<double> values;  // values[i] = P[X > y] for y in [knots[i], knots[i+1])
};

enum class ChannelKind { MM1, SlottedAloha, Empirical };

class ChannelModel {
public:
  static ChannelModel mm1(double lambda, double mu);
  static ChannelModel mm1_utilization(double rho, double mu);
  static ChannelModel aloha(double q, bool floor_mode = true);
  /// Empirical CCDF of a sample; non-finite entries are counted as exceeding every y.
  static ChannelModel empirical(std::span<const double> samples);
  static ChannelModel empirical(EmpiricalTable table);

  ChannelKind kind() const;
  double ccdf(double y) const;
  /// Smallest point > y at which the CCDF jumps or has a kink; +inf if none.
  double next_break(double y) const;
  bool piecewise_constant() const;
  std::string description() const;

  const MM1Params* as_mm1() const { return std::get_if<MM1Params>(&p_); }
  const AlohaParams* as_aloha() const { return std::get_if<AlohaParams>(&p_); }
  const EmpiricalTable* as_empirical() const { return std::get_if<EmpiricalTable>(&p_); }

private:
  std::variant<MM1Params, AlohaParams, EmpiricalTable> p_;
};

}  // namespace aoi2d
