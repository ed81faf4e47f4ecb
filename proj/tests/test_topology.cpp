#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "aoi2d/error.hpp"
#include "aoi2d/topology.hpp"

using namespace aoi2d;

namespace {

double star_mean(double d, double mu_center) {
  StarSpec s;
  s.d = d;
  s.mu_center = mu_center;
  const auto links = star_layout(s);
  return mean_from_ccdf(ccdf_2d_min(links, Kernel::exponential(1, 1), star_target(s)));
}

}  // namespace

TEST_SUITE("topology") {

TEST_CASE("sensor counts") {
  GridSpec g;
  g.d = 50;
  CHECK(sensor_count(g) == 36.0);
  g.s_select = 36;
  CHECK(grid_layout(g).size() == 36);
  g.d = 25;
  CHECK(sensor_count(g) == 144.0);  // halving d quadruples N
  g.d = 300;
  g.s_select = 1;
  CHECK(sensor_count(g) == 1.0);
  g.d = 70;  // non-divisible: round((300/70)^2) = 18
  CHECK(sensor_count(g) == 18.0);
  g.count = SensorCount::LatticePoints;
  g.d = 50;
  CHECK(sensor_count(g) == 49.0);
}

TEST_CASE("tier distances and aed at d = 34") {
  GridSpec g;
  g.d = 34;
  g.s_select = 16;
  const auto s = grid_layout(g);
  const auto k = Kernel::exponential(128, 128);
  const Position poi = g.point_of_interest();
  std::map<long, int> tier2;
  for (const auto& x : s) {
    const double l = aed(k, x.position, poi, 0.0);
    if (x.tier == 1) {
      CHECK(x.distance == doctest::Approx(34 / std::sqrt(2.0)).epsilon(1e-12));
      // The reference value is quoted at integer precision: 24.04 -> 24.
      CHECK(std::abs(l - 24.0) < 0.1);
    } else {
      CHECK(x.tier == 2);
      ++tier2[std::lround(l * 10)];
    }
  }
  CHECK(tier2.size() == 2);
  CHECK(tier2[538] == 8);
  CHECK(tier2[721] == 4);
}

TEST_CASE("tiers follow nearest ranks") {
  GridSpec g;
  g.d = 10;
  g.s_select = 36;
  const auto s = grid_layout(g);
  for (std::size_t r = 0; r < s.size(); ++r) CHECK(s[r].tier == (r < 4 ? 1 : r < 16 ? 2 : 3));
  for (std::size_t r = 1; r < s.size(); ++r) CHECK(s[r].distance >= s[r - 1].distance);
}

TEST_CASE("s_select larger than the area is a configuration error") {
  GridSpec g;
  g.d = 100;
  g.s_select = 36;
  try {
    grid_layout(g);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key_path() == "topology.s_select");
  }
}

TEST_CASE("capacity split") {
  GridSpec g;
  g.d = 50;
  const auto s = capacity_split(g);
  CHECK(s.n == 36);
  CHECK(s.mu_i == doctest::Approx(10.0 / 36).epsilon(1e-15));
  CHECK(s.lambda_i == doctest::Approx(0.14722).epsilon(1e-4));
  CHECK(s.q == doctest::Approx(0.010219).epsilon(1e-4));
  CHECK(s.n * s.mu_i == doctest::Approx(g.capacity).epsilon(1e-15));
  g.d = 300;
  g.s_select = 1;
  CHECK(capacity_split(g).mu_i == 10.0);
}

TEST_CASE("tier-1 symmetry") {
  GridSpec g;
  g.d = 20;
  g.s_select = 4;
  const auto k = Kernel::squared_exponential(30, 40);
  const auto links = grid_links(g, ChannelKind::MM1);
  const auto f = ccdf_2d_min(links, k, g.point_of_interest());
  const auto one = ccdf_2d_single(links[0], k, g.point_of_interest());
  for (const auto& l : links)
    for (double y = 0; y < 600; y += 13)
      CHECK(ccdf_2d_single(l, k, g.point_of_interest())(y) == doctest::Approx(one(y)).epsilon(1e-12));
  for (double y = 0; y < 600; y += 7) CHECK(f(y) == doctest::Approx(std::pow(one(y), 4)).epsilon(1e-12));
}

TEST_CASE("star layout") {
  StarSpec s;
  s.d = 3;
  s.mu_center = 0.2;
  const auto links = star_layout(s);
  REQUIRE(links.size() == 5);
  for (const auto& l : links) CHECK(l.channel.as_mm1()->mu == doctest::Approx(0.2).epsilon(1e-14));
  const Position t = star_target(s);
  std::vector<double> dist;
  for (const auto& l : links) dist.push_back(distance(l.position, t));
  std::sort(dist.begin(), dist.end());
  CHECK(dist[0] == 0.0);
  CHECK(dist[1] == doctest::Approx(3.0));
  CHECK(dist[2] == doctest::Approx(3 * std::sqrt(2.0)));
  CHECK(dist[3] == doctest::Approx(3 * std::sqrt(2.0)));
  CHECK(dist[4] == doctest::Approx(6.0));
  s.d = 0;
  s.mu_center = 1.0;
  const auto pooled = star_layout(s);
  REQUIRE(pooled.size() == 1);
  CHECK(aed(Kernel::exponential(1, 1), pooled[0].position, star_target(s), 0.0) == 0.0);
  s.mu_center = 1.5;
  CHECK_THROWS_AS(star_layout(s), ConfigError);
}

TEST_CASE("star allocation optimum") {
  // Pooling at the center stays optimal at small distances and loses at larger ones.
  for (double d : {0.0, 5.0}) {
    double best = kInf, arg = -1;
    for (int i = 0; i <= 100; ++i) {
      const double m = star_mean(d, i / 100.0);
      if (m < best) best = m, arg = i / 100.0;
    }
    CHECK(arg == 1.0);
  }
  CHECK(star_mean(25, 0.0) < star_mean(25, 1.0));
}

}  // TEST_SUITE
