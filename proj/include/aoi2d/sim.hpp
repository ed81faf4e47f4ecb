// Seeded discrete-event simulators producing delivery logs, and pathwise
// reconstruction of AoI and 2D-AoI from those logs.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "aoi2d/kernel.hpp"
#include "aoi2d/position.hpp"
#include "aoi2d/stats.hpp"

namespace aoi2d {

struct Delivery {
  double generated = 0.0;  // A_i
  double delivered = 0.0;  // D_i, NaN when lost
  bool ok = true;
};

struct DeliveryLog {
  std::vector<std::vector<Delivery>> sensors;
  double horizon = 0.0;
  std::uint64_t seed = 0;

  /// Columns sensor,i,A,D,delivered; D is empty for lost samples.
  void write_csv(std::ostream& os) const;
  /// Successfully delivered samples of one sensor.
  long delivered_count(int sensor) const;
};

enum class SimMode { IndependentAloha, SharedAloha, MM1, RandomAeD };

std::string to_string(SimMode m);
SimMode sim_mode_from_string(const std::string& s);

struct SimConfig {
  SimMode mode = SimMode::IndependentAloha;
  int n_sensors = 1;
  double p = 1.0;       // shared ALOHA transmit probability
  double q = 0.5;       // independent ALOHA budget
  double lambda = 0.5;  // M|M|1
  double mu = 1.0;
  double omega = 1.0;   // random-AeD sampling rate
  double p_succ = 1.0;
  long n_slots = 100000;
  double t_end = 1e5;
  double warmup = -1.0;  // < 0: default_warmup
  std::uint64_t seed = 0;
  bool seed_set = false;

  /// Throws ConfigError when the seed is missing or warmup >= horizon.
  void validate() const;
  double horizon() const;
};

/// max(1e4 slots, 100 / min_rate) time units.
double default_warmup(double min_rate);

/// Per slot every sensor transmits a fresh sample with probability p; a lone
/// transmitter is delivered at slot end, colliding samples are discarded.
/// Only sensors [0, n_tracked) are logged (all when n_tracked < 0); keep_lost
/// records collided samples with ok = false.
DeliveryLog simulate_shared_aloha(int n_sensors, double p, long n_slots, std::uint64_t seed,
                                  bool keep_lost = false, int n_tracked = -1);

/// Independent Bernoulli(q) successes per sensor and slot.
DeliveryLog simulate_independent_aloha(int n_sensors, double q, long n_slots,
                                       std::uint64_t seed);

/// Poisson(lambda) arrivals, exponential(mu) services, FCFS. Throws StabilityError for lambda >= mu.
DeliveryLog simulate_mm1(double lambda, double mu, double t_end, std::uint64_t seed);

/// 2D-AoI observed at Poisson(1) instants in [warmup, t_end) for a sensor whose
/// channel delivers at rate -ln(1 - q) with zero delay and carries the latest
/// successful sample of a Poisson(omega) stream thinned by p_succ.
std::vector<double> simulate_random_aed(double omega, double p_succ, double q, double t_end,
                                        std::uint64_t seed, double warmup = 100.0);

/// Integer instants warmup, warmup + 1, ..., n_slots - 1.
std::vector<double> slot_sample_times(long warmup, long n_slots);
/// Poisson(rate) observer instants in [t0, t1).
std::vector<double> poisson_sample_times(double rate, double t0, double t1, std::uint64_t seed);

/// AoI of one sensor at each (non-decreasing) sample time; kInf before the first delivery.
std::vector<double> empirical_aoi(const DeliveryLog& log, int sensor,
                                  std::span<const double> sample_times);

struct Empirical2dAoi {
  std::vector<double> values;  // finite minima in time order
  std::vector<long> wins;      // per sensor; ties go to the lowest index
  long n_infinite = 0;

  Estimate mean(int n_batches = 50) const;
  Estimate ccdf(double y, int n_batches = 50) const;
  double quantile(double p) const;
};

/// Minimum over sensors of AoI + AeD at each sample time.
/// positions[s] is the location of log sensor s.
Empirical2dAoi empirical_2d_aoi(const DeliveryLog& log, const Kernel& k,
                                std::span<const Position> positions, const Position& poi,
                                std::span<const double> sample_times);

}  // namespace aoi2d
