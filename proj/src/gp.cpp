#include "aoi2d/gp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "aoi2d/error.hpp"
#include "aoi2d/sim.hpp"
#include "aoi2d/rng.hpp"

namespace aoi2d {

namespace {

double covariance(const Kernel& k, const Sample& a, const Sample& b) {
  return k.sigma2 * g_temporal(k, std::abs(a.time - b.time)) * h_spatial(k, a.position, b.position);
}

Eigen::MatrixXd covariance_matrix(const Kernel& k, const std::vector<Sample>& s) {
  const auto n = static_cast<Eigen::Index>(s.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = k.sigma2;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double c = covariance(k, s[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(j)]);
      m(i, j) = c;
      m(j, i) = c;
    }
  }
  return m;
}

[[noreturn]] void throw_indefinite(const Eigen::MatrixXd& m, const std::vector<Sample>& s) {
  Eigen::Index bi = 0, bj = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j) {
      const double r = std::abs(m(i, j)) / std::sqrt(m(i, i) * m(j, j));
      if (r > best) {
        best = r;
        bi = i;
        bj = j;
      }
    }
  std::ostringstream os;
  os << "sample covariance not positive definite after jitter escalation";
  if (m.rows() > 1) {
    const Sample& a = s[static_cast<std::size_t>(bi)];
    const Sample& b = s[static_cast<std::size_t>(bj)];
    os << "; most correlated pair: (sensor " << a.sensor << ", t=" << a.time << ") and (sensor "
       << b.sensor << ", t=" << b.time << "), correlation " << best;
  }
  throw NumericError(os.str());
}

// Factorizes cov + (noise + jitter) I with escalating jitter.
void factorize(Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::MatrixXd& cov, const Kernel& k,
               double noise_var, const GpOptions& opt, const std::vector<Sample>& s) {
  // A zero starting jitter gets exactly one attempt.
  for (double jit = opt.jitter;; jit *= 10.0) {
    Eigen::MatrixXd m = cov;
    m.diagonal().array() += noise_var + jit * k.sigma2;
    llt.compute(m);
    if (llt.info() == Eigen::Success) return;
    if (!(jit > 0.0) || jit * 10.0 > opt.max_jitter * (1 + 1e-9)) break;
  }
  throw_indefinite(cov, s);
}

PosteriorResult finish(const Kernel& k, const Eigen::LLT<Eigen::MatrixXd>& llt, Eigen::VectorXd kstar) {
  PosteriorResult r;
  r.n_used = static_cast<int>(kstar.size());
  if (kstar.size() == 0) {
    r.variance = k.sigma2;
    return r;
  }
  llt.matrixL().solveInPlace(kstar);
  r.variance = std::clamp(k.sigma2 - kstar.squaredNorm(), 0.0, k.sigma2);
  r.reduction = k.sigma2 - r.variance;
  return r;
}

Eigen::VectorXd cross_covariance(const Kernel& k, const std::vector<Sample>& s,
                                 const std::vector<double>& log_h, double time) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i)
    v(static_cast<Eigen::Index>(i)) =
        k.sigma2 * std::exp(log_g_temporal(k, std::abs(time - s[i].time)) + log_h[i]);
  return v;
}

void validate_noise(double noise_var) {
  if (!(noise_var >= 0) || !std::isfinite(noise_var))
    throw DomainError("noise variance must be finite and >= 0");
}

}  // namespace

std::vector<Sample> usable_samples(const SampleSet& set, double time, const GpOptions& opt) {
  std::vector<Sample> s;
  for (const Sample& e : set.entries)
    if (e.time <= time && time - e.time <= set.window) s.push_back(e);
  std::stable_sort(s.begin(), s.end(), [](const Sample& a, const Sample& b) { return a.time > b.time; });
  std::map<int, int> per_sensor;
  std::vector<Sample> kept;
  for (const Sample& e : s)
    if (++per_sensor[e.sensor] <= opt.max_samples_per_sensor) kept.push_back(e);
  return kept;
}

PosteriorResult posterior_variance(const SampleSet& samples, const Kernel& k,
                                   const Position& target, double time, double noise_var,
                                   const GpOptions& opt) {
  k.validate();
  validate_noise(noise_var);
  const std::vector<Sample> s = usable_samples(samples, time, opt);
  std::vector<double> log_h(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) log_h[i] = log_h_spatial(k, s[i].position, target);
  Eigen::LLT<Eigen::MatrixXd> llt;
  if (!s.empty()) factorize(llt, covariance_matrix(k, s), k, noise_var, opt, s);
  return finish(k, llt, cross_covariance(k, s, log_h, time));
}

PosteriorTracker::PosteriorTracker(Kernel k, Position target, double noise_var, GpOptions opt)
    : k_(std::move(k)), target_(std::move(target)), noise_var_(noise_var), opt_(opt) {
  k_.validate();
  validate_noise(noise_var_);
}

void PosteriorTracker::add(const Sample& s) {
  active_.push_back(s);
  log_h_target_.push_back(log_h_spatial(k_, s.position, target_));
  int count = 0;
  for (const Sample& e : active_) count += e.sensor == s.sensor;
  if (count > opt_.max_samples_per_sensor) {
    // Drop the oldest sample of that sensor.
    std::size_t oldest = active_.size();
    for (std::size_t i = 0; i < active_.size(); ++i)
      if (active_[i].sensor == s.sensor && (oldest == active_.size() || active_[i].time < active_[oldest].time))
        oldest = i;
    active_.erase(active_.begin() + static_cast<std::ptrdiff_t>(oldest));
    log_h_target_.erase(log_h_target_.begin() + static_cast<std::ptrdiff_t>(oldest));
  }
  dirty_ = true;
}

void PosteriorTracker::expire(double cutoff) {
  std::size_t w = 0;
  for (std::size_t i = 0; i < active_.size(); ++i) {
    if (active_[i].time < cutoff) continue;
    active_[w] = active_[i];
    log_h_target_[w] = log_h_target_[i];
    ++w;
  }
  if (w != active_.size()) {
    active_.resize(w);
    log_h_target_.resize(w);
    dirty_ = true;
  }
}

void PosteriorTracker::refactor() {
  if (!active_.empty()) factorize(llt_, covariance_matrix(k_, active_), k_, noise_var_, opt_, active_);
  dirty_ = false;
}

PosteriorResult PosteriorTracker::variance_at(double time) {
  if (dirty_) refactor();
  return finish(k_, llt_, cross_covariance(k_, active_, log_h_target_, time));
}

PredVarSimResult mean_posterior_variance_sim(const PredVarSimConfig& cfg) {
  if (!std::isfinite(cfg.horizon_T) || cfg.horizon_T <= 0)
    throw ConfigError("horizon_T must be finite and positive", "gp.horizon_T");
  if (cfg.n_slots <= 0) throw ConfigError("n_slots must be positive", "sim.n_slots");
  const long warmup = cfg.warmup < 0 ? static_cast<long>(std::ceil(cfg.horizon_T)) : cfg.warmup;
  const long total = warmup + cfg.n_slots;
  const std::vector<GridSensor> sensors = grid_layout(cfg.grid);
  const CapacitySplit split = capacity_split(cfg.grid);
  const int n_sel = static_cast<int>(sensors.size());

  DeliveryLog log;
  if (cfg.shared_channel) {
    const int n_st = std::max(n_sel, static_cast<int>(std::lround(split.n)));
    log = simulate_shared_aloha(n_st, 1.0 / n_st, total, cfg.seed, false, n_sel);
  } else {
    log = simulate_independent_aloha(n_sel, split.q, total, cfg.seed);
  }

  const Kernel& k = cfg.kernel;
  const Position poi = cfg.grid.point_of_interest();
  const double eta = k.sigma2 / (k.sigma2 + cfg.noise_var);
  PosteriorTracker tracker(k, poi, cfg.noise_var, cfg.gp);
  std::vector<std::size_t> cursor(static_cast<std::size_t>(n_sel), 0);
  std::vector<double> latest(static_cast<std::size_t>(n_sel), -kInf);
  std::vector<double> log_h(static_cast<std::size_t>(n_sel));
  for (int s = 0; s < n_sel; ++s) log_h[static_cast<std::size_t>(s)] = log_h_spatial(k, sensors[static_cast<std::size_t>(s)].position, poi);

  std::vector<double> all, best;
  all.reserve(static_cast<std::size_t>(cfg.n_slots));
  best.reserve(static_cast<std::size_t>(cfg.n_slots));
  PredVarSimResult r;
  for (long slot = 0; slot < total; ++slot) {
    const double t = static_cast<double>(slot);
    for (int s = 0; s < n_sel; ++s) {
      const auto& v = log.sensors[static_cast<std::size_t>(s)];
      auto& c = cursor[static_cast<std::size_t>(s)];
      while (c < v.size() && v[c].delivered <= t) {
        tracker.add({s, sensors[static_cast<std::size_t>(s)].position, v[c].generated});
        latest[static_cast<std::size_t>(s)] = v[c].generated;
        ++c;
      }
    }
    tracker.expire(t - cfg.horizon_T);
    if (slot < warmup) continue;
    const double phi_all = tracker.variance_at(t).variance / k.sigma2;
    double phi_best = 1.0;
    for (int s = 0; s < n_sel; ++s) {
      const double a = latest[static_cast<std::size_t>(s)];
      if (!(t - a <= cfg.horizon_T)) continue;
      const double c = std::exp(log_g_temporal(k, t - a) + log_h[static_cast<std::size_t>(s)]);
      phi_best = std::min(phi_best, 1.0 - eta * c * c);
    }
    if (phi_all > phi_best + 1e-9) ++r.n_order_violations;
    all.push_back(phi_all);
    best.push_back(phi_best);
  }
  r.all_samples = batch_mean(all);
  r.best_sample = batch_mean(best);
  r.n_evaluations = static_cast<long>(all.size());
  return r;
}

}  // namespace aoi2d
