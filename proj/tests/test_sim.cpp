#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "aoi2d/calculus.hpp"
#include "aoi2d/error.hpp"
#include "aoi2d/sim.hpp"
#include "aoi2d/stats.hpp"
#include "aoi2d/topology.hpp"
#include "oracles.hpp"

using namespace aoi2d;

namespace {

std::vector<double> finite_only(const std::vector<double>& v) {
  std::vector<double> out;
  for (double x : v)
    if (std::isfinite(x)) out.push_back(x);
  return out;
}

std::string csv(const DeliveryLog& log) {
  std::ostringstream os;
  log.write_csv(os);
  return os.str();
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("single shared station without contention") {
  const auto log = simulate_shared_aloha(1, 1.0, 1000, 1);
  CHECK(log.delivered_count(0) == 1000);
  const auto t = slot_sample_times(10, 1000);
  for (double a : empirical_aoi(log, 0, t)) CHECK(a == 1.0);
}

TEST_CASE("shared ALOHA per-sensor success rate") {
  const long n = 10'000'000;
  const auto log = simulate_shared_aloha(36, 1.0 / 36, n, 2, false, 1);
  const double p = 1.0 / 36, expect = p * std::pow(1 - p, 35);
  CHECK(expect == doctest::Approx(0.01043).epsilon(1e-3));
  const double rate = static_cast<double>(log.delivered_count(0)) / n;
  CHECK(std::abs(rate - expect) < 3 * oracle::prop_se(expect, n));
}

TEST_CASE("shared ALOHA throughput approaches 1/e and deliveries are exclusive") {
  const long n = 1'000'000;
  const auto log = simulate_shared_aloha(100, 0.01, n, 3);
  long total = 0;
  std::set<double> slots;
  for (int s = 0; s < 100; ++s) {
    total += log.delivered_count(s);
    for (const auto& e : log.sensors[static_cast<std::size_t>(s)]) {
      CHECK(e.delivered == e.generated + 1.0);
      slots.insert(e.generated);
    }
  }
  CHECK(static_cast<long>(slots.size()) == total);
  CHECK(std::abs(static_cast<double>(total) / n - std::exp(-1.0)) < 0.01 * std::exp(-1.0));
}

TEST_CASE("collided samples are logged as lost on request") {
  const auto log = simulate_shared_aloha(5, 0.5, 2000, 4, true);
  long lost = 0;
  for (const auto& v : log.sensors)
    for (const auto& e : v)
      if (!e.ok) {
        ++lost;
        CHECK(std::isnan(e.delivered));
      }
  CHECK(lost > 0);
  CHECK(csv(log).find(",,0\n") != std::string::npos);
}

TEST_CASE("independent ALOHA AoI at slot boundaries") {
  const double q = std::exp(-1.0);
  const long n = 1'000'000;
  const auto log = simulate_independent_aloha(1, q, n, 5);
  const auto aoi = empirical_aoi(log, 0, slot_sample_times(100, n));
  const auto e = exceedance(aoi, 3.0);
  CHECK(e.value == doctest::Approx(0.2526).epsilon(2e-2));
  CHECK(std::abs(e.value - ccdf_aloha(q, 3.0)) < 3 * e.stderr_);
  const auto one = simulate_independent_aloha(1, 1.0 - 1e-12, 5000, 6);
  for (double a : empirical_aoi(one, 0, slot_sample_times(1, 5000))) CHECK(a == 1.0);
}

TEST_CASE("independent ALOHA matches the step CCDF in distribution") {
  const double q = 0.3;
  const auto f = channel_ccdf(ChannelModel::aloha(q));
  std::vector<double> dist;
  for (long n : {10'000L, 100'000L, 1'000'000L}) {
    const long slots = n * 10 + 100;
    const auto log = simulate_independent_aloha(1, q, slots, 40 + n);
    // Every tenth slot boundary keeps the observations close to independent.
    std::vector<double> t;
    for (long k = 100; k < slots; k += 10) t.push_back(static_cast<double>(k));
    const auto a = finite_only(empirical_aoi(log, 0, t));
    dist.push_back(sup_distance(a, f));
    CHECK(dist.back() * std::sqrt(static_cast<double>(a.size())) < 5.0);
  }
  CHECK(dist[2] < dist[0] / 3);
}

TEST_CASE("M|M|1 simulation matches the closed forms") {
  const auto log = simulate_mm1(0.53, 1.0, 1e7, 8);
  const auto t = poisson_sample_times(1.0, default_warmup(0.53), 1e7, 9);
  const auto a = finite_only(empirical_aoi(log, 0, t));
  const auto m = batch_mean(a);
  CHECK(std::abs(m.value - oracle::mm1_mean_aoi(0.53, 1.0)) < 3 * m.stderr_);
  CHECK(m.value == doctest::Approx(3.484).epsilon(2e-3));
  for (double y : {1.0, 2.0, 5.0, 10.0}) {
    const auto e = exceedance(a, y);
    CHECK(std::abs(e.value - ccdf_mm1(0.53, 1.0, y)) < 2.576 * e.stderr_);
  }
}

TEST_CASE("M|M|1 with rare arrivals delivers after one service time") {
  const auto log = simulate_mm1(1e-3, 1.0, 2e7, 10);
  std::vector<double> s;
  for (const auto& e : log.sensors[0]) s.push_back(e.delivered - e.generated);
  CcdfFn f;
  f.eval = [](double y) { return std::exp(-y); };
  const auto m = batch_mean(s);
  CHECK(std::abs(m.value - 1.0) < 4 * m.stderr_ + 2e-3);
  CHECK(sup_distance(s, f) * std::sqrt(static_cast<double>(s.size())) < 2.0);
  CHECK_THROWS_AS(simulate_mm1(1.0, 1.0, 10.0, 1), StabilityError);
}

TEST_CASE("sawtooth reconstruction") {
  const auto log = simulate_mm1(0.4, 1.0, 2000.0, 11);
  std::vector<double> t;
  for (int i = 0; i < 200000; ++i) t.push_back(i * 0.01);
  const auto a = empirical_aoi(log, 0, t);
  const auto& d = log.sensors[0];
  std::size_t j = 0;  // first delivery after t[i - 1]
  for (std::size_t i = 1; i < t.size(); ++i) {
    while (j < d.size() && d[j].delivered <= t[i - 1]) ++j;
    if (!std::isfinite(a[i - 1])) continue;
    const bool delivery = j < d.size() && d[j].delivered <= t[i];
    if (!delivery) CHECK(a[i] - a[i - 1] == doctest::Approx(0.01).epsilon(1e-6));
    else CHECK(a[i] < a[i - 1] + 0.01);
  }
  // Right at each delivery the age equals the system time of the delivered sample.
  for (std::size_t i = 1; i < 200 && i < d.size(); ++i) {
    if (d[i].delivered > 1999.0) break;
    const double at[1] = {d[i].delivered};
    CHECK(empirical_aoi(log, 0, at)[0] == doctest::Approx(d[i].delivered - d[i].generated));
  }
}

TEST_CASE("random aed simulation matches the convolution formula") {
  const double q = 0.1, p = 0.5, w = 0.4;
  const auto v = simulate_random_aed(w, p, q, 2e6, 12);
  for (double y : {1.0, 5.0, 10.0, 20.0}) {
    const auto e = exceedance(v, y);
    CHECK(std::abs(e.value - ccdf_2d_random_aed(q, p, w, y)) < 3 * e.stderr_);
  }
  CHECK(exceedance(v, 0.0).value == 1.0);
  const auto fast = simulate_random_aed(1000.0, 1.0, q, 2e5, 13);
  for (double y : {1.0, 5.0, 10.0}) {
    const auto e = exceedance(fast, y);
    CHECK(std::abs(e.value - std::pow(1 - q, y)) < 3 * e.stderr_ + 2e-3);
  }
}

TEST_CASE("empirical 2D-AoI of a co-located sensor is the AoI") {
  const auto log = simulate_independent_aloha(1, 0.2, 20000, 14);
  const auto t = slot_sample_times(0, 20000);
  const Position p[1] = {Position::of(1.0, 1.0)};
  const auto r = empirical_2d_aoi(log, Kernel::exponential(1, 1), p, p[0], t);
  const auto a = empirical_aoi(log, 0, t);
  const auto fa = finite_only(a);
  REQUIRE(r.values.size() == fa.size());
  for (std::size_t i = 0; i < fa.size(); ++i) CHECK(r.values[i] == fa[i]);
  CHECK(r.n_infinite == static_cast<long>(a.size() - fa.size()));
}

TEST_CASE("ties go to the lowest sensor index") {
  DeliveryLog log;
  log.sensors = {{{0.0, 1.0, true}}, {{0.0, 1.0, true}}};
  const Position p[2] = {Position::of(1.0, 0.0), Position::of(-1.0, 0.0)};
  const double t[3] = {0.5, 2.0, 3.0};
  const auto r = empirical_2d_aoi(log, Kernel::exponential(1, 1), p, Position::of(0.0, 0.0), t);
  CHECK(r.n_infinite == 1);
  CHECK(r.wins[0] == 2);
  CHECK(r.wins[1] == 0);
}

TEST_CASE("grid simulation agrees with the analytic mean") {
  GridSpec g;
  g.d = 40;
  g.s_select = 16;
  g.count = SensorCount::LatticePoints;
  const auto k = Kernel::exponential(128, 128);
  const auto links = grid_links(g, ChannelKind::SlottedAloha);
  const double analytic = mean_from_ccdf(ccdf_2d_min(links, k, g.point_of_interest()));
  const long n = 400'000;
  std::vector<Position> pos;
  for (const auto& l : links) pos.push_back(l.position);
  const auto t = slot_sample_times(10'000, n);
  const auto ind = empirical_2d_aoi(simulate_independent_aloha(16, capacity_split(g).q, n, 15), k,
                                    pos, g.point_of_interest(), t);
  const auto m = ind.mean();
  CHECK(std::abs(m.value - analytic) < 4 * m.stderr_);
  const int nn = static_cast<int>(std::lround(sensor_count(g)));
  const auto sh = empirical_2d_aoi(simulate_shared_aloha(nn, 1.0 / nn, n, 16, false, 16), k, pos,
                                   g.point_of_interest(), t);
  CHECK(std::abs(sh.mean().value - m.value) < 0.02 * m.value);
  CHECK(ind.quantile(0.5) <= ind.quantile(0.9));
}

TEST_CASE("runs are deterministic per seed") {
  CHECK(csv(simulate_shared_aloha(8, 0.125, 5000, 77, true)) ==
        csv(simulate_shared_aloha(8, 0.125, 5000, 77, true)));
  CHECK(csv(simulate_independent_aloha(4, 0.1, 5000, 77)) == csv(simulate_independent_aloha(4, 0.1, 5000, 77)));
  CHECK(csv(simulate_mm1(0.5, 1, 5000, 77)) == csv(simulate_mm1(0.5, 1, 5000, 77)));
  CHECK(csv(simulate_mm1(0.5, 1, 5000, 77)) != csv(simulate_mm1(0.5, 1, 5000, 78)));
  CHECK(simulate_random_aed(0.4, 0.5, 0.1, 5000, 3) == simulate_random_aed(0.4, 0.5, 0.1, 5000, 3));
}

TEST_CASE("log export") {
  DeliveryLog log;
  log.sensors = {{{0.0, 1.0, true}, {3.0, std::nan(""), false}}};
  CHECK(csv(log) == "sensor,i,A,D,delivered\n0,0,0,1,1\n0,1,3,,0\n");
}

TEST_CASE("config validation") {
  SimConfig c;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.seed_set = true;
  c.n_slots = 100;
  c.warmup = 100;
  try {
    c.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key_path() == "sim.warmup");
  }
  c.warmup = 10;
  CHECK_NOTHROW(c.validate());
  CHECK(default_warmup(1.0) == 1e4);
  CHECK(default_warmup(1e-3) == 1e5);
  CHECK(sim_mode_from_string(to_string(SimMode::RandomAeD)) == SimMode::RandomAeD);
  CHECK_THROWS_AS(sim_mode_from_string("tdma"), ConfigError);
}

}  // TEST_SUITE
