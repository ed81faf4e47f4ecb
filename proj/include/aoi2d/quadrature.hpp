// Adaptive tail integration of monotone non-negative functions with known breakpoints.
#pragma once

#include <functional>

namespace aoi2d {

struct QuadOptions {
  double rel_tol = 1e-8;
  double local_tol = 1e-10;     // local Simpson error that triggers subdivision
  double truncation = 1e-12;    // stop once the integrand falls below this
  double initial_width = 1.0;
  long max_evaluations = 200'000'000;
};

struct TailIntegrand {
  std::function<double(double)> f;           // non-increasing, >= 0
  std::function<double(double)> next_break;  // smallest break > x, +inf if none; may be empty
  bool piecewise_constant = false;           // f constant between consecutive breaks
  bool exp_weight = false;                   // integrate f(x) e^{-x} instead of f(x)
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

/// Integral of the integrand over [lo, inf). Throws NumericError when the
/// evaluation budget is exhausted or the integral diverges.
QuadResult integrate_tail(const TailIntegrand& in, double lo, const QuadOptions& opt = {});

/// Adaptive Simpson on a finite interval.
QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            double abs_tol, long max_evaluations = 10'000'000);

}  // namespace aoi2d
