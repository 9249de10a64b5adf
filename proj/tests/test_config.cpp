#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "jasda/config.hpp"
#include "jasda/errors.hpp"

using namespace jasda;
using nlohmann::json;

namespace {
std::string fixture_path(const char* name) {
  return std::string(JASDA_DATA_DIR) + "/" + name;
}

json minimal_config_json() {
  return json::parse(R"({
    "schema_version": 1,
    "horizon": 100,
    "seed": 7,
    "delta_jct_max": 200,
    "e_max": 50,
    "slices": [{"slice_id": "s1", "capacity": 20.0}],
    "jobs": [],
    "policy": {
      "lambda": 0.5,
      "alpha": [0.3, 0.2, 0.3],
      "beta": [0.35, 0.35, 0.2],
      "theta": 0.05,
      "tau_min": 2,
      "gamma": 1.0,
      "kappa": 2.0,
      "verification_weights": [0.5, 0.2, 0.3],
      "age_horizon": 50,
      "lead_time": 0
    }
  })");
}
}  // namespace

TEST_CASE("the shipped worked-example fixture parses") {
  WorkloadConfig config = load_config(fixture_path("table3.json"));
  CHECK(config.horizon == 50);
  REQUIRE(config.slices.size() == 1);
  CHECK(config.slices[0].slice_id == "s2");
  CHECK(config.slices[0].capacity_gb == 20.0);
  REQUIRE(config.jobs.size() == 3);
  CHECK(config.policy.lambda == 0.6);
}

TEST_CASE("empty jobs array is a valid degenerate config") {
  WorkloadConfig config = parse_config(minimal_config_json().dump());
  CHECK(config.jobs.empty());
}

TEST_CASE("out-of-range lambda is rejected naming the field") {
  json bad = minimal_config_json();
  bad["policy"]["lambda"] = 1.5;
  try {
    parse_config(bad.dump());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("policy.lambda") != std::string::npos);
  }
}

TEST_CASE("unknown keys are rejected") {
  json bad = minimal_config_json();
  bad["surprise"] = 1;
  CHECK_THROWS_AS(parse_config(bad.dump()), ConfigError);

  json bad2 = minimal_config_json();
  bad2["policy"]["typo"] = 1;
  CHECK_THROWS_AS(parse_config(bad2.dump()), ConfigError);
}

TEST_CASE("missing keys and malformed documents are rejected") {
  json bad = minimal_config_json();
  bad.erase("horizon");
  CHECK_THROWS_AS(parse_config(bad.dump()), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/nope.json"), IoError);
}

TEST_CASE("duplicate identifiers are rejected") {
  json bad = minimal_config_json();
  bad["slices"].push_back({{"slice_id", "s1"}, {"capacity", 10.0}});
  CHECK_THROWS_AS(parse_config(bad.dump()), ConfigError);
}

TEST_CASE("generated workloads round-trip through serialization") {
  GeneratorSpec spec;
  spec.horizon = 500;
  spec.arrival_rate = 0.05;
  spec.n_slices = 3;
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    WorkloadConfig config = generate_workload(spec, seed);
    WorkloadConfig reparsed = parse_config(write_config(config));
    CHECK(reparsed == config);
  }
}

TEST_CASE("generator determinism and degenerate rate") {
  GeneratorSpec spec;
  spec.horizon = 300;
  spec.arrival_rate = 0.0;
  CHECK(generate_workload(spec, 5).jobs.empty());

  spec.arrival_rate = 0.03;
  WorkloadConfig a = generate_workload(spec, 5);
  WorkloadConfig b = generate_workload(spec, 5);
  CHECK(a == b);
  WorkloadConfig c = generate_workload(spec, 6);
  CHECK_FALSE(a == c);
}

TEST_CASE("Poisson arrival counts concentrate around rate * horizon") {
  GeneratorSpec spec;
  spec.horizon = 10000;
  spec.arrival_rate = 0.1;
  WorkloadConfig config = generate_workload(spec, 2024);
  double expected = 1000.0;
  double band = 3.0 * std::sqrt(expected);
  CHECK(static_cast<double>(config.jobs.size()) > expected - band);
  CHECK(static_cast<double>(config.jobs.size()) < expected + band);
  // arrivals are sorted and in-horizon
  Tick prev = 0;
  for (const auto& job : config.jobs) {
    CHECK(job.arrival >= prev);
    CHECK(job.arrival < spec.horizon);
    prev = job.arrival;
  }
}
