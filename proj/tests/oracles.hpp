// Reference computations for the tests. Deliberately naive and independent of
// the library's closed forms, quadrature and linear algebra.
#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

/// Inverse of a decreasing function on [0, inf) by bracketing and bisection.
inline double invert_decreasing(const std::function<double(double)>& g, double y) {
  double lo = 0.0, hi = 1.0;
  while (g(hi) > y) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    (g(m) > y ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

/// Composite trapezoid rule with n panels.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, long n) {
  const double h = (b - a) / static_cast<double>(n);
  double s = 0.5 * (f(a) + f(b));
  for (long i = 1; i < n; ++i) s += f(a + h * static_cast<double>(i));
  return s * h;
}

/// Mean AoI of FCFS M|M|1: (1/mu)(1 + 1/rho + rho^2/(1 - rho)).
inline double mm1_mean_aoi(double rho, double mu) {
  return (1.0 + 1.0 / rho + rho * rho / (1.0 - rho)) / mu;
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Time-average estimate of P[AoI > y] for FCFS M|M|1 from an exact sawtooth
/// integration, with a batch-means standard error (50 batches).
struct TimeAverage {
  double value;
  double stderr_;
};

inline TimeAverage mm1_time_average_ccdf(double lambda, double mu, double y, long n_deliveries,
                                         unsigned long seed) {
  std::mt19937_64 eng(seed);
  std::exponential_distribution<double> arr(lambda), svc(mu);
  const int nb = 50;
  const long per = n_deliveries / nb;
  std::vector<double> bex(nb, 0.0), blen(nb, 0.0);
  double a_prev = 0.0, d_prev = 0.0, t = 0.0;
  // Warm up with one delivery so the sawtooth is defined.
  t = arr(eng);
  a_prev = t;
  d_prev = t + svc(eng);
  for (long i = 0; i < per * nb; ++i) {
    t += arr(eng);
    const double d = std::max(t, d_prev) + svc(eng);
    const double lo = std::max(d_prev, a_prev + y);
    const int b = static_cast<int>(i / per);
    if (d > lo) bex[b] += d - lo;
    blen[b] += d - d_prev;
    a_prev = t;
    d_prev = d;
  }
  double m = 0.0, ex = 0.0, len = 0.0;
  for (int b = 0; b < nb; ++b) ex += bex[b], len += blen[b];
  m = ex / len;
  double v = 0.0;
  for (int b = 0; b < nb; ++b) {
    const double r = bex[b] / blen[b] - m;
    v += r * r;
  }
  return {m, std::sqrt(v / (nb - 1) / nb)};
}

/// Binomial-proportion standard error.
inline double prop_se(double p, double n) { return std::sqrt(std::max(p * (1 - p), 1e-300) / n); }

}  // namespace oracle
