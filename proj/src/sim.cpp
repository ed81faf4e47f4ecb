#include "aoi2d/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "aoi2d/error.hpp"
#include "aoi2d/rng.hpp"

namespace aoi2d {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

void DeliveryLog::write_csv(std::ostream& os) const {
  os << "sensor,i,A,D,delivered\n";
  const auto old = os.precision(17);
  for (std::size_t s = 0; s < sensors.size(); ++s) {
    for (std::size_t i = 0; i < sensors[s].size(); ++i) {
      const Delivery& e = sensors[s][i];
      os << s << ',' << i << ',' << e.generated << ',';
      if (e.ok) os << e.delivered;
      os << ',' << (e.ok ? 1 : 0) << '\n';
    }
  }
  os.precision(old);
}

long DeliveryLog::delivered_count(int sensor) const {
  const auto& v = sensors.at(static_cast<std::size_t>(sensor));
  return static_cast<long>(std::count_if(v.begin(), v.end(), [](const Delivery& e) { return e.ok; }));
}

std::string to_string(SimMode m) {
  switch (m) {
    case SimMode::IndependentAloha: return "independent_aloha";
    case SimMode::SharedAloha: return "shared_aloha";
    case SimMode::MM1: return "mm1";
    case SimMode::RandomAeD: return "random_aed";
  }
  return "?";
}

SimMode sim_mode_from_string(const std::string& s) {
  if (s == "independent_aloha") return SimMode::IndependentAloha;
  if (s == "shared_aloha") return SimMode::SharedAloha;
  if (s == "mm1") return SimMode::MM1;
  if (s == "random_aed") return SimMode::RandomAeD;
  throw ConfigError("unknown sim mode '" + s + "'", "sim.mode");
}

double SimConfig::horizon() const {
  const bool slotted = mode == SimMode::IndependentAloha || mode == SimMode::SharedAloha;
  return slotted ? static_cast<double>(n_slots) : t_end;
}

void SimConfig::validate() const {
  if (!seed_set) throw ConfigError("a seed is required", "sim.seed");
  if (horizon() <= 0) throw ConfigError("horizon must be positive", "sim.n_slots");
  if (warmup >= horizon()) throw ConfigError("warmup must be shorter than the horizon", "sim.warmup");
  if (n_sensors < 1) throw ConfigError("need at least one sensor", "sim.n_sensors");
  switch (mode) {
    case SimMode::SharedAloha:
      if (!(p > 0 && p <= 1)) throw ConfigError("p must be in (0, 1]", "sim.p");
      break;
    case SimMode::IndependentAloha:
      if (!(q > 0 && q < 1)) throw ConfigError("q must be in (0, 1)", "sim.q");
      break;
    case SimMode::MM1:
      if (!(lambda > 0 && lambda < mu)) throw ConfigError("need 0 < lambda < mu", "sim.lambda");
      break;
    case SimMode::RandomAeD:
      if (!(omega > 0)) throw ConfigError("omega must be positive", "sim.omega");
      if (!(p_succ > 0 && p_succ <= 1)) throw ConfigError("p_succ must be in (0, 1]", "sim.p_succ");
      if (!(q > 0 && q < 1)) throw ConfigError("q must be in (0, 1)", "sim.q");
      break;
  }
}

double default_warmup(double min_rate) {
  if (!(min_rate > 0)) throw DomainError("default_warmup: rate must be positive");
  return std::max(1e4, 100.0 / min_rate);
}

DeliveryLog simulate_shared_aloha(int n_sensors, double p, long n_slots, std::uint64_t seed,
                                  bool keep_lost, int n_tracked) {
  if (n_sensors < 1) throw DomainError("simulate_shared_aloha: n_sensors must be >= 1");
  if (!(p > 0 && p <= 1)) throw DomainError("simulate_shared_aloha: p must be in (0, 1]");
  const int tracked = n_tracked < 0 ? n_sensors : std::min(n_tracked, n_sensors);
  DeliveryLog log;
  log.sensors.resize(static_cast<std::size_t>(tracked));
  log.horizon = static_cast<double>(n_slots);
  log.seed = seed;
  Rng rng(seed);
  std::vector<int> tx;
  tx.reserve(static_cast<std::size_t>(n_sensors));
  for (long k = 0; k < n_slots; ++k) {
    tx.clear();
    for (int s = 0; s < n_sensors; ++s)
      if (rng.bernoulli(p)) tx.push_back(s);
    const double a = static_cast<double>(k);
    if (tx.size() == 1) {
      if (tx[0] < tracked) log.sensors[static_cast<std::size_t>(tx[0])].push_back({a, a + 1.0, true});
    } else if (keep_lost) {
      for (int s : tx)
        if (s < tracked) log.sensors[static_cast<std::size_t>(s)].push_back({a, kNaN, false});
    }
  }
  return log;
}

DeliveryLog simulate_independent_aloha(int n_sensors, double q, long n_slots, std::uint64_t seed) {
  if (n_sensors < 1) throw DomainError("simulate_independent_aloha: n_sensors must be >= 1");
  if (!(q > 0 && q <= 1)) throw DomainError("simulate_independent_aloha: q must be in (0, 1]");
  DeliveryLog log;
  log.sensors.resize(static_cast<std::size_t>(n_sensors));
  log.horizon = static_cast<double>(n_slots);
  log.seed = seed;
  Rng rng(seed);
  const double log_fail = std::log1p(-q);
  // Geometric gaps between successes; sensors consume the stream in index order.
  for (auto& out : log.sensors) {
    out.reserve(static_cast<std::size_t>(static_cast<double>(n_slots) * q * 1.1) + 16);
    long k = -1;
    while (true) {
      const double u = 1.0 - rng.uniform();  // (0, 1]
      const double gap = q >= 1.0 ? 0.0 : std::floor(std::log(u) / log_fail);
      if (gap >= static_cast<double>(n_slots - k)) break;
      k += 1 + static_cast<long>(gap);
      if (k >= n_slots) break;
      const double a = static_cast<double>(k);
      out.push_back({a, a + 1.0, true});
    }
  }
  return log;
}

DeliveryLog simulate_mm1(double lambda, double mu, double t_end, std::uint64_t seed) {
  if (!(lambda > 0 && mu > 0)) throw DomainError("simulate_mm1: rates must be positive");
  if (lambda >= mu) throw StabilityError("simulate_mm1: need lambda < mu");
  DeliveryLog log;
  log.sensors.resize(1);
  log.horizon = t_end;
  log.seed = seed;
  Rng rng(seed);
  double a = 0.0;
  double d_prev = 0.0;
  auto& out = log.sensors[0];
  while (true) {
    a += rng.exponential(lambda);
    if (a >= t_end) break;
    const double d = std::max(a, d_prev) + rng.exponential(mu);
    out.push_back({a, d, true});
    d_prev = d;
  }
  return log;
}

std::vector<double> simulate_random_aed(double omega, double p_succ, double q, double t_end,
                                        std::uint64_t seed, double warmup) {
  if (!(omega > 0) || !(p_succ > 0 && p_succ <= 1) || !(q > 0 && q < 1))
    throw DomainError("simulate_random_aed: parameters out of range");
  if (!(warmup >= 0 && warmup < t_end)) throw DomainError("simulate_random_aed: bad warmup");
  Rng rng(seed);
  const double rate_c = -std::log1p(-q);
  const double rate_s = omega;

  // Three independent event streams merged in time order.
  double next_sample = rng.exponential(rate_s);
  double next_tx = rng.exponential(rate_c);
  double next_obs = warmup + rng.exponential(1.0);
  double last_success = -kInf;  // latest successful sample at the sensor
  double last_tx = -kInf;
  double carried = -kInf;       // generation time of the sample carried by the last tx
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(t_end - warmup) + 16);
  while (next_obs < t_end) {
    const double t = std::min({next_sample, next_tx, next_obs});
    if (t == next_sample) {
      if (rng.bernoulli(p_succ)) last_success = t;
      next_sample = t + rng.exponential(rate_s);
    } else if (t == next_tx) {
      last_tx = t;
      carried = last_success;
      next_tx = t + rng.exponential(rate_c);
    } else {
      // Channel AoI plus the carried sample's age at its transmission.
      out.push_back(std::isfinite(carried) ? (t - last_tx) + (last_tx - carried) : kInf);
      next_obs = t + rng.exponential(1.0);
    }
  }
  return out;
}

std::vector<double> slot_sample_times(long warmup, long n_slots) {
  std::vector<double> t;
  for (long k = std::max(0L, warmup); k < n_slots; ++k) t.push_back(static_cast<double>(k));
  return t;
}

std::vector<double> poisson_sample_times(double rate, double t0, double t1, std::uint64_t seed) {
  if (!(rate > 0)) throw DomainError("poisson_sample_times: rate must be positive");
  Rng rng(seed);
  std::vector<double> t;
  double x = t0 + rng.exponential(rate);
  while (x < t1) {
    t.push_back(x);
    x += rng.exponential(rate);
  }
  return t;
}

namespace {

// Advances a per-sensor cursor to the freshest sample delivered by time t.
struct Cursor {
  const std::vector<Delivery>* v = nullptr;
  std::size_t next = 0;
  double latest = -kInf;

  double freshest(double t) {
    while (next < v->size()) {
      const Delivery& e = (*v)[next];
      if (e.ok && e.delivered > t) break;
      if (e.ok) latest = std::max(latest, e.generated);
      ++next;
    }
    return latest;
  }
};

void check_sorted(std::span<const double> t) {
  if (!std::is_sorted(t.begin(), t.end()))
    throw DomainError("sample times must be non-decreasing");
}

}  // namespace

std::vector<double> empirical_aoi(const DeliveryLog& log, int sensor,
                                  std::span<const double> sample_times) {
  check_sorted(sample_times);
  Cursor c{&log.sensors.at(static_cast<std::size_t>(sensor))};
  std::vector<double> out;
  out.reserve(sample_times.size());
  for (double t : sample_times) {
    const double a = c.freshest(t);
    out.push_back(std::isfinite(a) ? t - a : kInf);
  }
  return out;
}

Estimate Empirical2dAoi::mean(int n_batches) const { return batch_mean(values, n_batches); }

Estimate Empirical2dAoi::ccdf(double y, int n_batches) const {
  return exceedance(values, y, n_batches);
}

double Empirical2dAoi::quantile(double p) const {
  if (values.empty()) throw DomainError("quantile of an empty sample");
  if (!(p > 0 && p < 1)) throw DomainError("quantile level must be in (0, 1)");
  std::vector<double> s = values;
  const std::size_t idx =
      std::min(s.size() - 1, static_cast<std::size_t>(std::ceil(p * static_cast<double>(s.size()))) - 1);
  std::nth_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(idx), s.end());
  return s[idx];
}

Empirical2dAoi empirical_2d_aoi(const DeliveryLog& log, const Kernel& k,
                                std::span<const Position> positions, const Position& poi,
                                std::span<const double> sample_times) {
  check_sorted(sample_times);
  if (positions.size() != log.sensors.size())
    throw DomainError("empirical_2d_aoi: one position per logged sensor is required");
  const std::size_t n = log.sensors.size();
  std::vector<Cursor> cur(n);
  std::vector<double> log_h(n);
  for (std::size_t s = 0; s < n; ++s) {
    cur[s].v = &log.sensors[s];
    log_h[s] = log_h_spatial(k, positions[s], poi);
  }
  Empirical2dAoi r;
  r.wins.assign(n, 0);
  r.values.reserve(sample_times.size());
  for (double t : sample_times) {
    double best = kInf;
    std::size_t arg = n;
    for (std::size_t s = 0; s < n; ++s) {
      const double a = cur[s].freshest(t);
      if (!std::isfinite(a)) continue;
      const double delta = t - a;
      const double v = delta + aed_log_h(k, log_h[s], delta);
      if (v < best) {
        best = v;
        arg = s;
      }
    }
    if (arg == n) {
      ++r.n_infinite;
      continue;
    }
    r.values.push_back(best);
    ++r.wins[arg];
  }
  return r;
}

}  // namespace aoi2d
