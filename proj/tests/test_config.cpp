#include <doctest.h>

#include <string>

#include "aoi2d/config.hpp"
#include "aoi2d/error.hpp"
#include "aoi2d/scenario.hpp"

using namespace aoi2d;

namespace {

std::string parse_error(const std::string& text) {
  try {
    Config::parse(text, "t.toml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("typed values") {
  const auto c = Config::parse(R"(name = "x"  # trailing comment
[kernel]
l_t = 128
l_s = inf
flag = true
[sweep]
values = [1, 2.5, inf]
names = ["a", "b"]
)");
  CHECK(c.string("name", "") == "x");
  CHECK(c.number("kernel.l_t") == 128.0);
  CHECK(c.number("kernel.l_s") == kInf);
  CHECK(c.boolean("kernel.flag", false));
  CHECK(c.numbers("sweep.values") == std::vector<double>{1, 2.5, kInf});
  CHECK(c.strings("sweep.names") == std::vector<std::string>{"a", "b"});
  CHECK(c.number("kernel.alpha", 3.0) == 3.0);
  CHECK(c.integer("kernel.l_t", 0) == 128);
}

TEST_CASE("quoted inf is accepted for numbers") {
  const auto c = Config::parse("[kernel]\nl_s = \"inf\"\n");
  CHECK(c.number("kernel.l_s") == kInf);
}

TEST_CASE("syntax errors carry line and column") {
  CHECK(parse_error("[kernel]\nl_t = 12x\n") .find("t.toml:2:7:") == 0);
  CHECK(parse_error("a = \"open\n").find("t.toml:1:5:") == 0);
  CHECK(parse_error("a = [1, [2]]\n").find("nested") != std::string::npos);
  CHECK(parse_error("[k]\nx = 1\nx = 2\n").find("t.toml:3:1: duplicate key 'k.x'") == 0);
  CHECK(parse_error("x = 1 2\n").find("t.toml:1:7:") == 0);
}

TEST_CASE("type errors name the key and its position") {
  const auto c = Config::parse("[kernel]\nl_t = \"long\"\n", "t.toml");
  try {
    c.number("kernel.l_t");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key_path() == "kernel.l_t");
    CHECK(std::string(e.what()).find("t.toml:2:7") != std::string::npos);
  }
  CHECK(c.integer("kernel.missing", 4) == 4);
  CHECK_THROWS_AS(c.number("kernel.missing"), ConfigError);
}

TEST_CASE("unknown keys are rejected with their path") {
  try {
    scenario_from_config(Config::parse("[kernel]\nlt = 3\n", "t.toml"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key_path() == "kernel.lt");
  }
}

TEST_CASE("invalid values are rejected with their path") {
  const std::pair<const char*, const char*> cases[] = {
      {"[kernel]\nl_t = -1\n", "kernel"},
      {"[kernel]\nfamily = \"periodic\"\n", "kernel.family"},
      {"[topology]\nd = 100\ns_select = 36\n", "topology.s_select"},
      {"[channel]\nrho = 1.2\n", "channel.rho"},
      {"[channel]\nkind = \"tdma\"\n", "channel.kind"},
      {"[sweep]\nvariable = \"q\"\nvalues = [1]\n", "sweep.variable"},
      {"[analysis]\ntargets = [\"median\"]\n", "analysis.targets"},
      {"[sim]\nseeds = 0\n", "sim.seeds"},
      {"[topology]\nsensor_count = \"some\"\n", "topology.sensor_count"},
  };
  for (const auto& [text, key] : cases) {
    CAPTURE(text);
    try {
      scenario_from_config(Config::parse(text));
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.key_path() == key);
    }
  }
}

TEST_CASE("every sweep point is validated up front") {
  try {
    scenario_from_config(Config::parse("[sweep]\nvariable = \"l_s\"\nvalues = [64, -1]\n"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key_path() == "kernel.l_s");
  }
}

TEST_CASE("json round trip") {
  const auto c = Config::parse(R"(name = "rt"
[kernel]
l_s = inf
[sweep]
values = [1, inf]
series = "l_s"
[output]
plotdata = false
)");
  const auto j = c.to_json();
  const auto back = Config::from_json(j);
  CHECK(back.to_json() == j);
  CHECK(back.number("kernel.l_s") == kInf);
  CHECK(back.numbers("sweep.values") == std::vector<double>{1, kInf});
  CHECK_FALSE(back.boolean("output.plotdata", true));
  CHECK(back.string("sweep.series", "") == "l_s");
}

TEST_CASE("mixed kernel keys") {
  const auto s = scenario_from_config(Config::parse(
      "[kernel]\ntemporal_family = \"squared_exponential\"\nspatial_family = \"exponential\"\n"));
  CHECK(s.kernel.temporal == Family::SquaredExponential);
  CHECK(s.kernel.spatial == Family::Exponential);
  CHECK(s.kernel.build().family() == KernelFamily::MixedProduct);
}

}  // TEST_SUITE
