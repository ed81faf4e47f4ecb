// Gaussian-process posterior variance with a zero mean function.
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "aoi2d/kernel.hpp"
#include "aoi2d/position.hpp"
#include "aoi2d/stats.hpp"
#include "aoi2d/topology.hpp"

namespace aoi2d {

struct Sample {
  int sensor = 0;
  Position position;
  double time = 0.0;  // generation time
};

struct SampleSet {
  std::vector<Sample> entries;
  double window = kInf;  // samples older than this at query time are ignored
};

struct GpOptions {
  int max_samples_per_sensor = 64;
  double jitter = 1e-10;      // relative to sigma2
  double max_jitter = 1e-6;   // escalation stops here
};

struct PosteriorResult {
  double variance = 0.0;
  double reduction = 0.0;  // variance + reduction == sigma2
  int n_used = 0;
};

/// Samples of `set` that enter the posterior at `time`: generated no later than
/// `time`, within the window and among the most recent per sensor.
std::vector<Sample> usable_samples(const SampleSet& set, double time, const GpOptions& opt = {});

/// Posterior variance at (target, time) given samples. Observation values are
/// irrelevant. Throws NumericError naming the most correlated pair when the
/// covariance stays indefinite after jitter escalation.
PosteriorResult posterior_variance(const SampleSet& samples, const Kernel& k,
                                   const Position& target, double time, double noise_var = 0.0,
                                   const GpOptions& opt = {});

/// Posterior variance for a slowly changing sample set; keeps the Cholesky
/// factor until the set changes.
class PosteriorTracker {
public:
  PosteriorTracker(Kernel k, Position target, double noise_var, GpOptions opt = {});

  void add(const Sample& s);
  /// Drops samples generated before `cutoff` and per-sensor excess.
  void expire(double cutoff);
  PosteriorResult variance_at(double time);
  std::size_t size() const { return active_.size(); }

private:
  void refactor();

  Kernel k_;
  Position target_;
  double noise_var_;
  GpOptions opt_;
  std::vector<Sample> active_;
  bool dirty_ = true;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  std::vector<double> log_h_target_;
};

struct PredVarSimConfig {
  GridSpec grid;
  Kernel kernel;
  double horizon_T = 1000.0;
  long n_slots = 50000;  // evaluated slots after warm-up
  long warmup = -1;      // < 0: horizon_T slots
  std::uint64_t seed = 0;
  bool shared_channel = false;
  double noise_var = 0.0;
  GpOptions gp;
};

struct PredVarSimResult {
  Estimate all_samples;  // normalized by sigma2
  Estimate best_sample;
  long n_evaluations = 0;
  long n_order_violations = 0;  // instants with all-samples > best-sample
};

/// Time-averaged posterior variance at the point of interest using every
/// delivered sample of the last horizon_T slots, next to the freshest-sample prediction.
PredVarSimResult mean_posterior_variance_sim(const PredVarSimConfig& cfg);

}  // namespace aoi2d
