#include <doctest.h>

#include <cmath>
#include <vector>

#include "aoi2d/error.hpp"
#include "aoi2d/kernel.hpp"
#include "oracles.hpp"

using namespace aoi2d;

namespace {

std::vector<Kernel> all_families() {
  return {Kernel::exponential(128, 64), Kernel::squared_exponential(128, 64),
          Kernel::rational_quadratic(128, 64, 2.0, 3.0),
          Kernel::mixed(Family::Exponential, Family::SquaredExponential, 50, 20),
          Kernel::mixed(Family::SquaredExponential, Family::Exponential, 50, 20),
          Kernel::mixed(Family::RationalQuadratic, Family::Exponential, 50, 20, 1.0, 0.7)};
}

Position at(double x) { return Position::of(x, 0.0); }

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("g is normalized at zero for every family") {
  for (const auto& k : all_families()) CHECK(g_temporal(k, 0.0) == 1.0);
}

TEST_CASE("exponential g at one length scale") {
  const auto k = Kernel::exponential(128, 128);
  CHECK(g_temporal(k, 128.0) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
}

TEST_CASE("rational quadratic with large beta approaches squared exponential") {
  const auto rq = Kernel::rational_quadratic(128, 128, 1.0, 1e4);
  const auto se = Kernel::squared_exponential(128, 128);
  const double a = g_temporal(rq, 64.0), b = g_temporal(se, 64.0);
  CHECK(std::abs(a - b) / b < 1e-3);
}

TEST_CASE("negative time difference is a domain error") {
  CHECK_THROWS_AS(g_temporal(Kernel::exponential(1, 1), -1.0), DomainError);
}

TEST_CASE("g_inverse closed forms") {
  for (const auto& k : all_families()) CHECK(g_inverse(k, 1.0) == 0.0);
  CHECK(g_inverse(Kernel::exponential(128, 1), std::exp(-1.0)) == doctest::Approx(128.0).epsilon(1e-14));
  const auto se = Kernel::squared_exponential(128, 1);
  const double closed = g_inverse(se, 0.5);
  CHECK(closed == doctest::Approx(128.0 * std::sqrt(2.0 * std::log(2.0))).epsilon(1e-14));
  CHECK(closed == doctest::Approx(150.7085).epsilon(1e-6));
  const double bis = oracle::invert_decreasing([&](double d) { return g_temporal(se, d); }, 0.5);
  CHECK(std::abs(closed - bis) / closed < 1e-9);
}

TEST_CASE("g_inverse rejects arguments outside (0, 1]") {
  const auto k = Kernel::exponential(1, 1);
  CHECK_THROWS_AS(g_inverse(k, 0.0), DomainError);
  CHECK_THROWS_AS(g_inverse(k, -0.5), DomainError);
  CHECK_THROWS_AS(g_inverse(k, 1.5), DomainError);
}

TEST_CASE("g_inverse round trip on [0, 10 l_t]") {
  for (const auto& k : all_families()) {
    for (int i = 0; i <= 100; ++i) {
      const double d = 0.1 * i * k.l_t;
      const double back = g_inverse(k, g_temporal(k, d));
      CHECK(std::abs(back - d) <= 1e-9 * std::max(d, 1.0));
    }
  }
}

TEST_CASE("g_inverse is decreasing in y") {
  for (const auto& k : all_families()) {
    double prev = kInf;
    for (double y = 0.001; y <= 1.0; y += 0.01) {
      const double v = g_inverse(k, y);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("bisection fallback covers custom temporal correlation") {
  // g(t) = 1 / (1 + t^3 / l_t^3), no closed inverse implemented.
  const auto k = Kernel::custom([](double t) { return 1.0 / (1.0 + t * t * t / 1000.0); },
                                Family::Exponential, 10.0, 5.0);
  for (double y : {0.9, 0.5, 0.1, 1e-4}) {
    const double expect = 10.0 * std::cbrt(1.0 / y - 1.0);
    CHECK(g_inverse(k, y) == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("h_spatial values") {
  for (const auto& k : all_families()) CHECK(h_spatial(k, at(3.0), at(3.0)) == 1.0);
  CHECK(h_spatial(Kernel::exponential(1, 128), at(0), at(128)) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(h_spatial(Kernel::squared_exponential(1, 2), at(0), at(2)) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(h_spatial(Kernel::rational_quadratic(1, 2, 3.0, 1.0), at(0), at(2)) ==
        doctest::Approx(std::pow(1.0 + 4.0 / 24.0, -3.0)).epsilon(1e-15));
  for (const auto& base : all_families()) {
    auto k = base;
    k.spatially_flat = true;
    CHECK(h_spatial(k, at(0), at(1e6)) == 1.0);
  }
  CHECK(h_spatial(Kernel::exponential(1, kInf), at(0), at(1e6)) == 1.0);
}

TEST_CASE("h_spatial rejects mixed dimensions") {
  CHECK_THROWS_AS(h_spatial(Kernel::exponential(1, 1), Position::of(0.0), Position::of(0.0, 1.0)),
                  DomainError);
}

TEST_CASE("aed examples") {
  const auto ex = Kernel::exponential(128, 128);
  for (double d : {0.0, 1.0, 10.0, 100.0}) CHECK(aed(ex, at(0), at(71), d) == doctest::Approx(71.0));
  const auto se = Kernel::squared_exponential(20, 10);  // (l_t / l_s) r = 10 at r = 5
  CHECK(aed(se, at(0), at(5), 0.0) == doctest::Approx(10.0).epsilon(1e-12));
  const double v = aed(se, at(0), at(5), 10.0);
  CHECK(v == doctest::Approx(std::sqrt(200.0) - 10.0).epsilon(1e-12));
  CHECK(v == doctest::Approx(4.1421).epsilon(1e-4));
  const double bis = oracle::invert_decreasing(
                         [&](double d) { return g_temporal(se, d); },
                         g_temporal(se, 10.0) * h_spatial(se, at(0), at(5))) - 10.0;
  CHECK(std::abs(v - bis) < 1e-9);
  for (const auto& k : all_families())
    for (double d : {0.0, 3.0, 300.0}) CHECK(aed(k, at(4), at(4), d) == 0.0);
}

TEST_CASE("aed satisfies the defining identity") {
  for (const auto& k : all_families()) {
    for (double r : {0.5, 5.0, 30.0, 80.0}) {
      for (double d : {0.0, 1.0, 17.0, 150.0}) {
        const double l = aed(k, at(0), at(r), d);
        CHECK(l >= 0.0);
        const double lhs = g_temporal(k, d + l);
        const double rhs = g_temporal(k, d) * h_spatial(k, at(0), at(r));
        CHECK(std::abs(lhs - rhs) <= 1e-9 * rhs);
      }
    }
  }
}

TEST_CASE("exponential aed is constant in the age") {
  const auto k = Kernel::mixed(Family::Exponential, Family::SquaredExponential, 7, 3);
  const double a0 = aed(k, at(0), at(4), 0.0);
  for (double d : {1.0, 10.0, 100.0}) CHECK(aed(k, at(0), at(4), d) == a0);
}

TEST_CASE("squared exponential aed decays to zero with age") {
  const auto k = Kernel::squared_exponential(10, 4);
  double prev = kInf;
  for (double d = 0; d <= 1000; d += 10) {
    const double v = aed(k, at(0), at(6), d);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(aed(k, at(0), at(6), 1e6) < 1e-3 * aed(k, at(0), at(6), 0.0));
  CHECK(aed(k, at(0), at(6), 0.0) ==
        doctest::Approx(aed(Kernel::exponential(10, 4), at(0), at(6), 0.0)).epsilon(1e-12));
}

TEST_CASE("rational quadratic aed dips, then grows with slope h^(-1/2beta) - 1") {
  // For finite beta the closed form has its minimum at sqrt(2 beta) l_t h^(1/2beta).
  const double beta = 1.5, lt = 10;
  const auto k = Kernel::rational_quadratic(lt, 4, 2.0, beta);
  const double h = h_spatial(k, at(0), at(6));
  const double dstar = std::sqrt(2 * beta) * lt * std::pow(h, 1 / (2 * beta));
  double prev = kInf;
  for (double d = 0; d <= dstar; d += dstar / 50) {
    const double v = aed(k, at(0), at(6), d);
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
  for (double d = dstar; d <= 10 * dstar; d += dstar / 10) {
    const double v = aed(k, at(0), at(6), d);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  const double slope = std::pow(h, -1 / (2 * beta)) - 1;
  CHECK(aed(k, at(0), at(6), 1e7) / 1e7 == doctest::Approx(slope).epsilon(1e-4));
}

TEST_CASE("rational quadratic with large shapes matches squared exponential aed") {
  const auto rq = Kernel::rational_quadratic(10, 4, 1e4, 1e4);
  const auto se = Kernel::squared_exponential(10, 4);
  for (double r : {0.5, 2.0, 6.0, 12.0})
    for (double d : {0.0, 3.0, 20.0}) {
      const double a = aed(rq, at(0), at(r), d), b = aed(se, at(0), at(r), d);
      CHECK(std::abs(a - b) <= 1e-3 * b);
    }
}

TEST_CASE("closed-form aed matches the bisection route") {
  for (const auto& k : all_families())
    for (double r : {0.0, 1.0, 10.0, 40.0})
      for (double d : {0.0, 2.0, 50.0})
        CHECK(std::abs(aed(k, at(0), at(r), d) - aed_generic(k, at(0), at(r), d)) < 1e-7);
}

TEST_CASE("custom correlation underflow yields an infinite aed") {
  const auto k = Kernel::custom([](double t) { return std::exp(-t); }, Family::Exponential, 1.0, 1.0);
  CHECK(aed(k, at(0), at(800), 0.0) == kInf);
}

TEST_CASE("closed forms stay finite where g h underflows") {
  const double v = aed(Kernel::exponential(1, 1), at(0), at(800), 0.0);
  CHECK(v == doctest::Approx(800.0));
}

TEST_CASE("positions") {
  CHECK(distance(Position::of(0, 0, 0), Position::of(1, 2, 2)) == 3.0);
  CHECK(distance(Position::of(1, 5), Position::of(4, 1)) == distance(Position::of(4, 1), Position::of(1, 5)));
  CHECK_THROWS_AS(distance(Position::of(0), Position::of(0, 0)), DomainError);
}

TEST_CASE("kernel validation") {
  CHECK_THROWS_AS(Kernel::exponential(-1, 1).validate(), DomainError);
  CHECK_THROWS_AS(Kernel::exponential(1, 0).validate(), DomainError);
  CHECK_THROWS_AS(Kernel::exponential(1, 1, 0.0).validate(), DomainError);
  CHECK_THROWS_AS(Kernel::rational_quadratic(1, 1, 0.0, 1.0).validate(), DomainError);
  CHECK_NOTHROW(Kernel::exponential(1, kInf).validate());
  CHECK(family_from_string(to_string(Family::SquaredExponential)) == Family::SquaredExponential);
  CHECK_THROWS_AS(family_from_string("periodic"), ConfigError);
}

}  // TEST_SUITE
