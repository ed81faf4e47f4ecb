#include "aoi2d/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "aoi2d/error.hpp"

namespace aoi2d {

Estimate batch_mean(std::span<const double> series, int n_batches) {
  if (series.empty()) throw DomainError("batch_mean: empty series");
  Estimate e;
  double sum = 0.0;
  for (double v : series) sum += v;
  e.value = sum / static_cast<double>(series.size());
  const std::size_t b = static_cast<std::size_t>(std::max(n_batches, 2));
  const std::size_t len = series.size() / b;
  if (len == 0) return e;
  double s2 = 0.0;
  for (std::size_t i = 0; i < b; ++i) {
    double m = 0.0;
    for (std::size_t j = 0; j < len; ++j) m += series[i * len + j];
    m /= static_cast<double>(len);
    s2 += (m - e.value) * (m - e.value);
  }
  e.stderr_ = std::sqrt(s2 / static_cast<double>(b - 1) / static_cast<double>(b));
  return e;
}

Estimate exceedance(std::span<const double> series, double y, int n_batches) {
  std::vector<double> ind(series.size());
  std::transform(series.begin(), series.end(), ind.begin(),
                 [y](double v) { return v > y ? 1.0 : 0.0; });
  return batch_mean(ind, n_batches);
}

double sup_distance(std::span<const double> samples, const CcdfFn& f) {
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double sup = 0.0;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    // Empirical CCDF just below s[i] is (n - i) / n, at s[i] it is (n - j) / n.
    const double below = (n - static_cast<double>(i)) / n;
    const double at = (n - static_cast<double>(j)) / n;
    const double fa = f(s[i]);
    const double fb = f(std::nextafter(s[i], -kInf));
    sup = std::max({sup, std::abs(at - fa), std::abs(below - fb)});
    i = j;
  }
  return sup;
}

}  // namespace aoi2d
