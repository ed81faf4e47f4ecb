// Small estimators used to attach standard errors to simulated quantities.
#pragma once

#include <span>

#include "aoi2d/calculus.hpp"

namespace aoi2d {

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

/// Mean with a batch-means standard error for autocorrelated series.
Estimate batch_mean(std::span<const double> series, int n_batches = 50);

/// Fraction of series entries > y with a batch-means standard error.
Estimate exceedance(std::span<const double> series, double y, int n_batches = 50);

/// sup_y |F_emp(y) - f(y)| over the sample points (both one-sided limits).
double sup_distance(std::span<const double> samples, const CcdfFn& f);

}  // namespace aoi2d
