#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "jasda/core.hpp"
#include "jasda/rng.hpp"

using namespace jasda;

namespace {
PolicyParams good_params() {
  PolicyParams p;
  p.lambda = 0.5;
  p.alpha = {0.4, 0.5};
  p.beta = {0.4, 0.3, 0.2};
  p.theta = 0.05;
  p.tau_min = 2;
  p.gamma = 1.0;
  p.kappa = 2.0;
  p.verification_weights = {0.5, 0.5};
  p.age_horizon = 60;
  p.lead_time = 0;
  return p;
}
}  // namespace

TEST_CASE("validate_policy accepts a conforming bundle") {
  PolicyParams p = good_params();
  p.alpha = {0.4, 0.5};  // sum 0.9
  p.beta = {0.5, 0.2, 0.2};  // sum 0.9
  CHECK_NOTHROW(validate_policy(p));
}

TEST_CASE("validate_policy names the violated invariant") {
  PolicyParams p = good_params();
  p.lambda = 1.2;
  CHECK_THROWS_WITH_AS(validate_policy(p), "lambda out of range",
                       std::invalid_argument);

  p = good_params();
  p.alpha = {0.6, 0.6};
  CHECK_THROWS_WITH_AS(validate_policy(p), "alpha sum exceeds 1",
                       std::invalid_argument);

  p = good_params();
  p.theta = 0.0;
  CHECK_THROWS_WITH_AS(validate_policy(p), "theta out of range",
                       std::invalid_argument);

  p = good_params();
  p.verification_weights = {0.5, 0.4};
  CHECK_THROWS_WITH_AS(validate_policy(p),
                       "verification weights do not sum to 1",
                       std::invalid_argument);

  p = good_params();
  p.kappa = 0.0;
  CHECK_THROWS_AS(validate_policy(p), std::invalid_argument);
}

TEST_CASE("half-open window arithmetic") {
  Window w{"s1", 20.0, 40, 10};
  CHECK(w.end() == 50);
  Variant v;
  v.t_start = 40;
  v.predicted_duration = 7;
  CHECK(v.end() == 47);
}

TEST_CASE("commitment disjointness is checkable by sorted sweep") {
  // end_i <= start_{i+1} after sorting by start.
  std::vector<Commitment> commits = {{"a", "J", "s1", 40, 47, 0},
                                     {"b", "J", "s1", 47, 50, 0},
                                     {"c", "K", "s1", 20, 31, 0}};
  std::sort(commits.begin(), commits.end(),
            [](const Commitment& x, const Commitment& y) {
              return x.start < y.start;
            });
  for (std::size_t i = 1; i < commits.size(); ++i) {
    CHECK(commits[i - 1].end <= commits[i].start);
  }
}
