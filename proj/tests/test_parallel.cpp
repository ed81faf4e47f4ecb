#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "aoi2d/parallel.hpp"
#include "aoi2d/rng.hpp"
#include "aoi2d/sim.hpp"

using namespace aoi2d;

TEST_SUITE("parallel") {

TEST_CASE("parallel map matches the serial reference bit for bit") {
  auto task = [](std::size_t i) {
    const auto log = simulate_independent_aloha(3, 0.05, 20000, derive_seed(99, i));
    const auto a = empirical_aoi(log, 0, slot_sample_times(1000, 20000));
    double s = 0.0;
    for (double v : a) s += v;
    return s;
  };
  const auto ser = serial_map(24, task);
  for (int w : {1, 2, 4, 7}) CHECK(parallel_map(24, task, w) == ser);
}

TEST_CASE("exceptions surface after the loop, lowest index first") {
  auto task = [](std::size_t i) -> int {
    if (i == 5) throw std::runtime_error("five");
    if (i == 9) throw std::logic_error("nine");
    return static_cast<int>(i);
  };
  try {
    parallel_map(16, task, 4);
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "five");
  }
}

TEST_CASE("derived seeds are distinct and stable") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  std::vector<std::uint64_t> s;
  for (std::uint64_t m : {0ull, 1ull, 2ull})
    for (std::uint64_t i = 0; i < 100; ++i) s.push_back(derive_seed(m, i));
  std::sort(s.begin(), s.end());
  CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  Rng c(6);
  double u = c.uniform();
  CHECK((u >= 0.0 && u < 1.0));
}

}  // TEST_SUITE
