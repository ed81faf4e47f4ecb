#include "aoi2d/kernel.hpp"

#include <cmath>

namespace aoi2d {

namespace {

// Below this product of correlations a sample carries no usable information.
constexpr double kLogUnderflow = -690.7755278982137;  // ln(1e-300)

void require_delta(double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw DomainError("kernel: time difference must be finite and >= 0");
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::Exponential: return "exponential";
    case Family::SquaredExponential: return "squared_exponential";
    case Family::RationalQuadratic: return "rational_quadratic";
    case Family::Custom: return "custom";
  }
  return "?";
}

std::string to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::Exponential: return "exponential";
    case KernelFamily::SquaredExponential: return "squared_exponential";
    case KernelFamily::RationalQuadratic: return "rational_quadratic";
    case KernelFamily::MixedProduct: return "mixed";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  if (s == "exponential" || s == "exp") return Family::Exponential;
  if (s == "squared_exponential" || s == "se") return Family::SquaredExponential;
  if (s == "rational_quadratic" || s == "rq") return Family::RationalQuadratic;
  throw ConfigError("unknown kernel family '" + s + "'");
}

KernelFamily Kernel::family() const {
  if (temporal == spatial) {
    switch (temporal) {
      case Family::Exponential: return KernelFamily::Exponential;
      case Family::SquaredExponential: return KernelFamily::SquaredExponential;
      case Family::RationalQuadratic: return KernelFamily::RationalQuadratic;
      case Family::Custom: break;
    }
  }
  return KernelFamily::MixedProduct;
}

void Kernel::validate() const {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw DomainError("kernel: sigma2 must be > 0");
  if (!(l_t > 0.0) || !std::isfinite(l_t)) throw DomainError("kernel: l_t must be > 0");
  if (!spatially_flat && (!(l_s > 0.0) || !std::isfinite(l_s)))
    throw DomainError("kernel: l_s must be > 0 (use the flat flag for infinity)");
  if (spatial == Family::Custom) throw DomainError("kernel: custom spatial correlation unsupported");
  if (spatial == Family::RationalQuadratic && !(alpha > 0.0))
    throw DomainError("kernel: alpha must be > 0");
  if (temporal == Family::RationalQuadratic && !(beta > 0.0))
    throw DomainError("kernel: beta must be > 0");
  if (temporal == Family::Custom && !custom_g)
    throw DomainError("kernel: custom temporal family needs a correlation function");
}

Kernel Kernel::mixed(Family temporal, Family spatial, double l_t, double l_s, double alpha,
                     double beta, double sigma2) {
  Kernel k;
  k.temporal = temporal;
  k.spatial = spatial;
  k.l_t = l_t;
  k.spatially_flat = std::isinf(l_s);
  k.l_s = k.spatially_flat ? kInf : l_s;
  k.alpha = alpha;
  k.beta = beta;
  k.sigma2 = sigma2;
  k.validate();
  return k;
}

Kernel Kernel::exponential(double l_t, double l_s, double sigma2) {
  return mixed(Family::Exponential, Family::Exponential, l_t, l_s, 1.0, 1.0, sigma2);
}

Kernel Kernel::squared_exponential(double l_t, double l_s, double sigma2) {
  return mixed(Family::SquaredExponential, Family::SquaredExponential, l_t, l_s, 1.0, 1.0,
               sigma2);
}

Kernel Kernel::rational_quadratic(double l_t, double l_s, double alpha, double beta,
                                  double sigma2) {
  return mixed(Family::RationalQuadratic, Family::RationalQuadratic, l_t, l_s, alpha, beta,
               sigma2);
}

Kernel Kernel::custom(std::function<double(double)> g, Family spatial, double l_t, double l_s,
                      double alpha, double sigma2) {
  Kernel k;
  k.temporal = Family::Custom;
  k.spatial = spatial;
  k.custom_g = std::move(g);
  k.l_t = l_t;
  k.spatially_flat = std::isinf(l_s);
  k.l_s = k.spatially_flat ? kInf : l_s;
  k.alpha = alpha;
  k.sigma2 = sigma2;
  k.validate();
  return k;
}

double log_g_temporal(const Kernel& k, double delta) {
  require_delta(delta);
  switch (k.temporal) {
    case Family::Exponential: return -delta / k.l_t;
    case Family::SquaredExponential: return -delta * delta / (2.0 * k.l_t * k.l_t);
    case Family::RationalQuadratic:
      return -k.beta * std::log1p(delta * delta / (2.0 * k.beta * k.l_t * k.l_t));
    case Family::Custom: return std::log(k.custom_g(delta));
  }
  return 0.0;
}

double g_temporal(const Kernel& k, double delta) {
  if (k.temporal == Family::Custom) {
    require_delta(delta);
    return k.custom_g(delta);
  }
  return std::exp(log_g_temporal(k, delta));
}

double g_inverse_bisect(const Kernel& k, double y) {
  if (!(y > 0.0) || y > 1.0) throw DomainError("g_inverse: argument must lie in (0, 1]");
  if (y == 1.0) return 0.0;
  const double log_y = std::log(y);
  double lo = 0.0;
  double hi = k.l_t;
  int grow = 0;
  while (log_g_temporal(k, hi) >= log_y) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 2000 || !std::isfinite(hi))
      throw NumericError("g_inverse: failed to bracket the inverse");
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (log_g_temporal(k, mid) > log_y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double g_inverse_log(const Kernel& k, double log_y) {
  if (log_y > 0.0) log_y = 0.0;  // argument above 1 only arises from round-off
  switch (k.temporal) {
    case Family::Exponential: return -k.l_t * log_y;
    case Family::SquaredExponential: return k.l_t * std::sqrt(-2.0 * log_y);
    case Family::RationalQuadratic:
      return std::sqrt(2.0 * k.beta * k.l_t * k.l_t * std::expm1(-log_y / k.beta));
    case Family::Custom: return g_inverse_bisect(k, std::exp(log_y));
  }
  return 0.0;
}

double g_inverse(const Kernel& k, double y) {
  if (!(y > 0.0) || y > 1.0) throw DomainError("g_inverse: argument must lie in (0, 1]");
  return g_inverse_log(k, std::log(y));
}

double log_h_at_distance(const Kernel& k, double r) {
  if (k.spatially_flat) return 0.0;
  switch (k.spatial) {
    case Family::Exponential: return -r / k.l_s;
    case Family::SquaredExponential: return -r * r / (2.0 * k.l_s * k.l_s);
    case Family::RationalQuadratic:
      return -k.alpha * std::log1p(r * r / (2.0 * k.alpha * k.l_s * k.l_s));
    case Family::Custom: break;
  }
  throw DomainError("kernel: unsupported spatial family");
}

double log_h_spatial(const Kernel& k, const Position& a, const Position& b) {
  return log_h_at_distance(k, distance(a, b));
}

double h_spatial(const Kernel& k, const Position& a, const Position& b) {
  return std::exp(log_h_spatial(k, a, b));
}

double aed_log_h(const Kernel& k, double log_h, double delta) {
  if (log_h >= 0.0) return 0.0;
  switch (k.temporal) {
    case Family::Exponential: return -k.l_t * log_h;
    case Family::SquaredExponential: {
      const double a = -2.0 * k.l_t * k.l_t * log_h;
      return a / (std::sqrt(a + delta * delta) + delta);
    }
    case Family::RationalQuadratic: {
      const double e = std::expm1(-log_h / k.beta);
      const double two_bl2 = 2.0 * k.beta * k.l_t * k.l_t;
      const double root = std::sqrt(two_bl2 * e + (1.0 + e) * delta * delta);
      return e * (two_bl2 + delta * delta) / (root + delta);
    }
    case Family::Custom: {
      // Only the bisection route works in the linear domain and can underflow.
      const double log_gd = log_g_temporal(k, delta);
      if (log_gd + log_h < kLogUnderflow) return kInf;
      const double v = g_inverse_bisect(k, std::exp(log_gd + log_h)) - delta;
      return v > 0.0 ? v : 0.0;
    }
  }
  return 0.0;
}

double aed(const Kernel& k, const Position& a, const Position& b, double delta) {
  return aed_log_h(k, log_h_spatial(k, a, b), delta);
}

double aed_generic(const Kernel& k, const Position& a, const Position& b, double delta) {
  const double lp = log_g_temporal(k, delta) + log_h_spatial(k, a, b);
  if (lp < kLogUnderflow) return kInf;
  return g_inverse_bisect(k, std::exp(lp)) - delta;
}

double age_for_2d_aoi(const Kernel& k, double log_h, double y) {
  if (log_h >= 0.0) return y;
  switch (k.temporal) {
    case Family::Exponential: return y + k.l_t * log_h;
    case Family::SquaredExponential: {
      const double root_a = k.l_t * std::sqrt(-2.0 * log_h);
      if (y < root_a) return -1.0;
      return std::sqrt((y - root_a) * (y + root_a));
    }
    case Family::RationalQuadratic: {
      const double two_bl2 = 2.0 * k.beta * k.l_t * k.l_t;
      const double c = std::exp(log_h / k.beta);
      const double v = c * y * y + two_bl2 * std::expm1(log_h / k.beta);
      if (v < 0.0) return -1.0;
      return std::sqrt(v);
    }
    case Family::Custom: {
      const double target = log_g_temporal(k, y) - log_h;
      if (target > 0.0) return -1.0;
      return g_inverse_bisect(k, std::exp(target));
    }
  }
  return y;
}

}  // namespace aoi2d
