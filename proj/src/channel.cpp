#include "aoi2d/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace aoi2d {

namespace {

void require_mm1(double lambda, double mu) {
  if (!(lambda > 0.0) || !(mu > 0.0)) throw DomainError("M|M|1: rates must be > 0");
  if (!(lambda < mu)) throw StabilityError("M|M|1: lambda must be < mu (rho < 1)");
}

void require_q(double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("ALOHA: q must lie in (0, 1)");
}

}  // namespace

double ccdf_mm1(double lambda, double mu, double y) {
  require_mm1(lambda, mu);
  if (y < 0.0) return 1.0;
  const double rho = lambda / mu;
  const double inv = 1.0 / (1.0 - rho);
  const double v = std::exp(-(1.0 - rho) * mu * y) - (inv + rho * mu * y) * std::exp(-mu * y) +
                   inv * std::exp(-lambda * y);
  return std::clamp(v, 0.0, 1.0);
}

double ccdf_aloha(double q, double y, bool floor_mode) {
  require_q(q);
  if (y < 0.0) return 1.0;
  const double n = floor_mode ? std::floor(y) : y;
  return std::exp(n * std::log1p(-q));
}

double mm1_tail_bound(double mu, double y) {
  if (!(mu > 0.0)) throw DomainError("mm1_tail_bound: mu must be > 0");
  const double edge = 2.0 * std::log(3.0) / mu;
  if (y < edge * (1.0 - 1e-15)) {
    std::ostringstream os;
    os << "mm1_tail_bound: requires y >= 2 ln 3 / mu = " << edge;
    throw DomainError(os.str());
  }
  return 3.0 * std::exp(-0.5 * mu * y);
}

double two_sensor_tail_bound(double mu1, double mu2, double aed, double y) {
  return 9.0 * std::exp(0.5 * mu2 * aed) * std::exp(-0.5 * (mu1 + mu2) * y);
}

double provision_rate(double y_target, double epsilon, double mu2, double aed) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("provision_rate: need 0 < epsilon < 1");
  if (!(y_target > 0.0)) throw ConfigError("provision_rate: need y_target > 0");
  if (!(mu2 > 0.0)) throw ConfigError("provision_rate: need mu2 > 0");
  if (!(aed >= 0.0 && aed < y_target)) throw ConfigError("provision_rate: need 0 <= aed < y_target");
  const double ln3 = std::log(3.0);
  if (!(aed < y_target - 2.0 * ln3 / mu2))
    throw ConfigError("provision_rate: violated aed < y_target - 2 ln 3 / mu2");
  const double mu1 = 2.0 * (std::log(9.0) - std::log(epsilon)) / y_target -
                     mu2 * (1.0 - aed / y_target);
  if (!(mu1 > 0.0))
    throw ConfigError("provision_rate: violated mu2 < 2 (ln 9 - ln epsilon) / (y_target - aed); "
                      "helper sensor meets the target alone");
  if (!(y_target >= 2.0 * ln3 / mu1))
    throw ConfigError("provision_rate: violated y_target >= 2 ln 3 / mu1");
  return mu1;
}

double aloha_budget(double n_stations) {
  if (!(n_stations >= 1.0)) throw DomainError("aloha_budget: need at least one station");
  return 1.0 / (n_stations * std::numbers::e);
}

ChannelModel ChannelModel::mm1(double lambda, double mu) {
  require_mm1(lambda, mu);
  ChannelModel c;
  c.p_ = MM1Params{lambda, mu};
  return c;
}

ChannelModel ChannelModel::mm1_utilization(double rho, double mu) {
  if (!(rho > 0.0 && rho < 1.0)) throw StabilityError("M|M|1: rho must lie in (0, 1)");
  return mm1(rho * mu, mu);
}

ChannelModel ChannelModel::aloha(double q, bool floor_mode) {
  require_q(q);
  ChannelModel c;
  c.p_ = AlohaParams{q, floor_mode};
  return c;
}

ChannelModel ChannelModel::empirical(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("empirical channel: no samples");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  EmpiricalTable t;
  std::size_t i = 0;
  while (i < s.size() && std::isfinite(s[i])) {
    std::size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    t.knots.push_back(s[i]);
    t.values.push_back(static_cast<double>(s.size() - j) / n);
    i = j;
  }
  return empirical(std::move(t));
}

ChannelModel ChannelModel::empirical(EmpiricalTable table) {
  if (table.knots.size() != table.values.size())
    throw DomainError("empirical channel: knots/values size mismatch");
  for (std::size_t i = 0; i < table.knots.size(); ++i) {
    if (i > 0 && !(table.knots[i] > table.knots[i - 1]))
      throw DomainError("empirical channel: knots must be strictly increasing");
    if (!(table.values[i] >= 0.0 && table.values[i] <= 1.0) ||
        (i > 0 && table.values[i] > table.values[i - 1]))
      throw DomainError("empirical channel: values must be non-increasing in [0, 1]");
  }
  ChannelModel c;
  c.p_ = std::move(table);
  return c;
}

ChannelKind ChannelModel::kind() const {
  if (std::holds_alternative<MM1Params>(p_)) return ChannelKind::MM1;
  if (std::holds_alternative<AlohaParams>(p_)) return ChannelKind::SlottedAloha;
  return ChannelKind::Empirical;
}

double ChannelModel::ccdf(double y) const {
  if (const auto* m = as_mm1()) return ccdf_mm1(m->lambda, m->mu, y);
  if (const auto* a = as_aloha()) return ccdf_aloha(a->q, y, a->floor_mode);
  const auto& t = std::get<EmpiricalTable>(p_);
  auto it = std::upper_bound(t.knots.begin(), t.knots.end(), y);
  if (it == t.knots.begin()) return 1.0;
  return t.values[static_cast<std::size_t>(it - t.knots.begin()) - 1];
}

double ChannelModel::next_break(double y) const {
  if (as_mm1()) return y < 0.0 ? 0.0 : kInf;
  if (const auto* a = as_aloha()) {
    if (y < 0.0) return 0.0;
    return a->floor_mode ? std::floor(y) + 1.0 : kInf;
  }
  const auto& t = std::get<EmpiricalTable>(p_);
  auto it = std::upper_bound(t.knots.begin(), t.knots.end(), y);
  return it == t.knots.end() ? kInf : *it;
}

bool ChannelModel::piecewise_constant() const {
  if (as_mm1()) return false;
  if (const auto* a = as_aloha()) return a->floor_mode;
  return true;
}

std::string ChannelModel::description() const {
  std::ostringstream os;
  os.precision(10);
  if (const auto* m = as_mm1())
    os << "mm1(lambda=" << m->lambda << ",mu=" << m->mu << ")";
  else if (const auto* a = as_aloha())
    os << "aloha(q=" << a->q << (a->floor_mode ? ",floor" : ",continuous") << ")";
  else
    os << "empirical(" << std::get<EmpiricalTable>(p_).knots.size() << " knots)";
  return os.str();
}

}  // namespace aoi2d
