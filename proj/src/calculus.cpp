#include "aoi2d/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "aoi2d/error.hpp"
#include "aoi2d/rng.hpp"

namespace aoi2d {

CcdfFn channel_ccdf(const ChannelModel& channel) {
  CcdfFn f;
  f.eval = [channel](double y) { return channel.ccdf(y); };
  f.next_break = [channel](double y) { return channel.next_break(y); };
  f.piecewise_constant = channel.piecewise_constant();
  f.description = channel.description();
  return f;
}

CcdfFn shifted(const CcdfFn& f, double shift) {
  CcdfFn g;
  g.support_lo = f.support_lo + shift;
  g.eval = [f, shift](double y) { return f(y - shift); };
  if (f.next_break) {
    g.next_break = [f, shift](double y) { return f.next_break(y - shift) + shift; };
  } else {
    const double lo = g.support_lo;
    g.next_break = [lo](double y) { return y < lo ? lo : kInf; };
  }
  g.piecewise_constant = f.piecewise_constant;
  std::ostringstream os;
  os << "shift(" << f.description << "," << shift << ")";
  g.description = os.str();
  return g;
}

CcdfFn product(std::vector<CcdfFn> factors) {
  if (factors.empty()) throw ConfigError("product: no factors");
  if (factors.size() == 1) return factors.front();
  CcdfFn p;
  p.support_lo = kInf;
  p.piecewise_constant = true;
  std::string desc = "min[";
  for (const auto& f : factors) {
    p.support_lo = std::min(p.support_lo, f.support_lo);
    p.domain_lo = std::max(p.domain_lo, f.domain_lo);
    p.piecewise_constant = p.piecewise_constant && f.piecewise_constant;
    desc += f.description + ";";
  }
  desc.back() = ']';
  p.description = std::move(desc);
  auto shared = std::make_shared<const std::vector<CcdfFn>>(std::move(factors));
  p.eval = [shared](double y) {
    double v = 1.0;
    for (const auto& f : *shared) {
      v *= f(y);
      if (v == 0.0) break;
    }
    return v;
  };
  p.next_break = [shared](double y) {
    double b = kInf;
    for (const auto& f : *shared) {
      double c = f.next_break ? f.next_break(y) : (y < f.support_lo ? f.support_lo : kInf);
      b = std::min(b, c);
    }
    return b;
  };
  return p;
}

CcdfFn ccdf_2d_single(const SensorLink& link, const Kernel& k, const Position& target) {
  const double lh = log_h_spatial(k, link.position, target);
  const double y_lo = aed_log_h(k, lh, 0.0);
  const ChannelModel ch = link.channel;
  CcdfFn f;
  f.support_lo = y_lo;
  f.piecewise_constant = ch.piecewise_constant();
  std::ostringstream os;
  os << "2d(sensor=" << link.index << "," << ch.description() << ",aed0=" << y_lo << ")";
  f.description = os.str();
  if (!std::isfinite(y_lo)) {
    f.eval = [](double) { return 1.0; };
    f.next_break = [](double) { return kInf; };
    return f;
  }
  f.eval = [k, lh, ch](double y) {
    const double x = age_for_2d_aoi(k, lh, y);
    return x < 0.0 ? 1.0 : ch.ccdf(x);
  };
  f.next_break = [k, lh, ch, y_lo](double y) {
    if (y < y_lo) return y_lo;
    const double x = std::max(age_for_2d_aoi(k, lh, y), 0.0);
    double b = ch.next_break(x);
    if (!std::isfinite(b)) return kInf;
    double yb = b + aed_log_h(k, lh, b);
    if (yb <= y) {
      b = ch.next_break(b);
      if (!std::isfinite(b)) return kInf;
      yb = b + aed_log_h(k, lh, b);
    }
    return yb;
  };
  return f;
}

CcdfFn ccdf_2d_min(std::span<const SensorLink> links, const Kernel& k, const Position& target) {
  if (links.empty()) throw ConfigError("ccdf_2d_min: empty link list");
  std::vector<CcdfFn> fs;
  fs.reserve(links.size());
  for (const auto& l : links) fs.push_back(ccdf_2d_single(l, k, target));
  return product(std::move(fs));
}

double mean_from_ccdf(const CcdfFn& f, const QuadOptions& opt) {
  const double lo = std::max(f.support_lo, 0.0);
  if (!std::isfinite(lo)) throw NumericError("mean_from_ccdf: CCDF identically 1, mean infinite");
  TailIntegrand in;
  in.f = [&f](double y) { return f(y); };
  in.next_break = [&f](double y) {
    if (f.next_break) return f.next_break(y);
    return kInf;
  };
  in.piecewise_constant = f.piecewise_constant;
  QuadOptions o = opt;
  if (lo > 0.0) o.initial_width = std::max(o.initial_width, 0.25 * lo);
  return lo + integrate_tail(in, lo, o).value;
}

double quantile_from_ccdf(const CcdfFn& f, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile_from_ccdf: p must lie in (0, 1)");
  const double level = 1.0 - p;
  double lo = std::max(f.support_lo, 0.0);
  if (!std::isfinite(lo)) throw NumericError("quantile_from_ccdf: CCDF identically 1");
  if (f(lo) <= level) return lo;
  double hi = std::max(1.0, 2.0 * lo);
  int grow = 0;
  while (f(hi) > level) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 1100 || !std::isfinite(hi)) throw NumericError("quantile_from_ccdf: no bracket");
  }
  while (hi - lo > 1e-9 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) <= level)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

CcdfFn ccdf_predvar_single(const SensorLink& link, const Kernel& k, const Position& target,
                           double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("ccdf_predvar: eta must lie in (0, 1]");
  const double lh = log_h_spatial(k, link.position, target);
  const double log_eta = std::log(eta);
  const double z_lo = -std::expm1(log_eta + 2.0 * lh);
  const ChannelModel ch = link.channel;
  // z at which the age threshold equals x.
  auto z_of_age = [k, lh, log_eta](double x) {
    return -std::expm1(log_eta + 2.0 * (log_g_temporal(k, x) + lh));
  };
  auto age_of_z = [k, lh, log_eta](double z) {
    const double arg = 0.5 * std::log1p(-z) - 0.5 * log_eta - lh;
    return arg >= 0.0 ? -1.0 : g_inverse_log(k, arg);
  };
  CcdfFn f;
  f.support_lo = z_lo;
  f.domain_lo = 0.0;
  f.piecewise_constant = ch.piecewise_constant();
  std::ostringstream os;
  os << "predvar(sensor=" << link.index << "," << ch.description() << ",eta=" << eta << ")";
  f.description = os.str();
  f.eval = [ch, age_of_z](double z) {
    if (!(z >= 0.0 && z < 1.0)) throw DomainError("predvar CCDF: z must lie in [0, 1)");
    const double x = age_of_z(z);
    return x < 0.0 ? 1.0 : ch.ccdf(x);
  };
  f.next_break = [ch, age_of_z, z_of_age, z_lo](double z) {
    if (z < z_lo) return z_lo;
    if (z >= 1.0) return kInf;
    const double x = std::max(age_of_z(z), 0.0);
    double b = ch.next_break(x);
    if (!std::isfinite(b)) return kInf;
    double zb = z_of_age(b);
    if (zb <= z) {
      b = ch.next_break(b);
      if (!std::isfinite(b)) return kInf;
      zb = z_of_age(b);
    }
    return zb >= 1.0 ? kInf : zb;
  };
  return f;
}

CcdfFn ccdf_predvar_min(std::span<const SensorLink> links, const Kernel& k,
                        const Position& target, double eta) {
  if (links.empty()) throw ConfigError("ccdf_predvar_min: empty link list");
  std::vector<CcdfFn> fs;
  for (const auto& l : links) fs.push_back(ccdf_predvar_single(l, k, target, eta));
  return product(std::move(fs));
}

double mean_predvar(const CcdfFn& f, const QuadOptions& opt) {
  // z = 1 - e^{-v}; the integral of f dz becomes the integral of f(z(v)) e^{-v} dv.
  const double z_lo = std::clamp(f.support_lo, 0.0, 1.0);
  if (z_lo >= 1.0) return 1.0;
  const double v_lo = -std::log1p(-z_lo);
  auto z_of_v = [](double v) { return -std::expm1(-v); };
  TailIntegrand in;
  in.exp_weight = true;
  in.piecewise_constant = f.piecewise_constant;
  in.f = [&f, z_of_v](double v) {
    const double z = z_of_v(v);
    return z >= 1.0 ? 0.0 : f(z);
  };
  in.next_break = [&f, z_of_v](double v) {
    if (!f.next_break) return kInf;
    const double zb = f.next_break(z_of_v(v));
    if (!(zb < 1.0)) return kInf;
    return -std::log1p(-zb);
  };
  QuadOptions o = opt;
  o.initial_width = 0.05;
  return z_lo + integrate_tail(in, v_lo, o).value;
}

double ccdf_2d_random_aed(double q, double p_succ, double omega, double y) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("random AeD: q must lie in (0, 1)");
  if (!(p_succ > 0.0 && p_succ <= 1.0)) throw DomainError("random AeD: p_succ must lie in (0, 1]");
  if (!(omega > 0.0)) throw DomainError("random AeD: omega must be > 0");
  if (y < 0.0) return 1.0;
  const double l = std::log1p(-q);
  const double r = p_succ * omega;
  const double den = l + r;
  if (std::abs(den) < 1e-12)
    throw DegenerateParameterError(
        "random AeD: p_succ * omega equals -ln(1-q); both decay rates coincide");
  return (l * std::exp(-r * y) + r * std::exp(l * y)) / den;
}

double random_aed_interarrival_check(double omega, double p_succ, long n_samples,
                                     std::uint64_t seed) {
  if (!(omega > 0.0) || !(p_succ > 0.0 && p_succ <= 1.0))
    throw DomainError("interarrival check: need omega > 0 and p_succ in (0, 1]");
  if (n_samples < 1) throw DomainError("interarrival check: need n_samples >= 1");
  Rng rng(seed);
  double t = 0.0;
  double last = 0.0;
  double sum = 0.0;
  long count = 0;
  while (count < n_samples) {
    t += rng.exponential(omega);
    if (rng.bernoulli(p_succ)) {
      sum += t - last;
      last = t;
      ++count;
    }
  }
  return static_cast<double>(count) / sum;
}

}  // namespace aoi2d
