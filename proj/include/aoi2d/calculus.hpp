// Composition of 2D-AoI distributions: AeD shifts, minima over sensors,
// tail means, quantiles and prediction-variance distributions.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "aoi2d/channel.hpp"
#include "aoi2d/kernel.hpp"
#include "aoi2d/position.hpp"
#include "aoi2d/quadrature.hpp"

namespace aoi2d {

/// Numerically evaluable complementary CDF. Non-increasing, values in [0, 1],
/// identically 1 below support_lo.
struct CcdfFn {
  std::function<double(double)> eval;
  std::function<double(double)> next_break;  // may be empty
  double support_lo = 0.0;
  double domain_lo = -kInf;  // arguments below this are a domain error
  bool piecewise_constant = false;
  std::string description;

  double operator()(double y) const {
    if (y < domain_lo) throw DomainError("CCDF argument below its domain");
    return y < support_lo ? 1.0 : eval(y);
  }
};

struct SensorLink {
  Position position;
  ChannelModel channel;
  int index = 0;
};

/// CCDF of a channel without spatial shift.
CcdfFn channel_ccdf(const ChannelModel& channel);

/// y -> f(y - shift); the CCDF of X + shift.
CcdfFn shifted(const CcdfFn& f, double shift);

/// Pointwise product (minimum of independent variables).
CcdfFn product(std::vector<CcdfFn> factors);

/// P[2D-AoI of `link` with respect to `target` > y].
CcdfFn ccdf_2d_single(const SensorLink& link, const Kernel& k, const Position& target);

/// Minimal 2D-AoI over independent links. Throws ConfigError for an empty list.
CcdfFn ccdf_2d_min(std::span<const SensorLink> links, const Kernel& k, const Position& target);

/// Mean of the variable with CCDF f: integral of f over [0, inf).
double mean_from_ccdf(const CcdfFn& f, const QuadOptions& opt = {});

/// Smallest y with f(y) <= 1 - p, to 1e-9 in y.
double quantile_from_ccdf(const CcdfFn& f, double p);

/// z -> P[Phi / sigma2 > z] for prediction from the most recent sample of `link`.
/// eta = sigma2 / (sigma2 + noise variance).
CcdfFn ccdf_predvar_single(const SensorLink& link, const Kernel& k, const Position& target,
                           double eta = 1.0);

/// Minimal prediction variance over independent links.
CcdfFn ccdf_predvar_min(std::span<const SensorLink> links, const Kernel& k,
                        const Position& target, double eta = 1.0);

/// E[Phi] / sigma2 = integral of f over z in [0, 1).
double mean_predvar(const CcdfFn& f, const QuadOptions& opt = {});

/// 2D-AoI CCDF for an exponentially distributed AeD (rate p_succ * omega) on a
/// continuous ALOHA channel (1 - q)^y.
double ccdf_2d_random_aed(double q, double p_succ, double omega, double y);

/// Simulates a Poisson(omega) sampling stream thinned by Bernoulli(p_succ) and
/// returns the maximum-likelihood exponential rate of successful interarrivals.
double random_aed_interarrival_check(double omega, double p_succ, long n_samples,
                                     std::uint64_t seed);

}  // namespace aoi2d
