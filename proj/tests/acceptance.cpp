// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each check pins its tolerance in place.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "jasda/clearing.hpp"
#include "jasda/config.hpp"
#include "jasda/engine.hpp"
#include "jasda/errors.hpp"
#include "jasda/fmp.hpp"
#include "jasda/rng.hpp"
#include "jasda/scoring.hpp"
#include "jasda/trust.hpp"
#include "test_support.hpp"

using namespace jasda;
using jasda_test::BoxMuller;
using jasda_test::brute_force_wis;
using jasda_test::make_scored;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok,
            const std::string& detail) {
  std::printf("[%s] %d. %s: %s\n", ok ? "PASS" : "FAIL", criterion,
              name.c_str(), detail.c_str());
  if (!ok) ++g_failures;
}

std::string fixture_path(const char* name) {
  return std::string(JASDA_DATA_DIR) + "/" + name;
}

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

// ---- 1. golden worked example -------------------------------------------
void criterion_golden_example() {
  auto start = Clock::now();
  double s1 = composite_score(0.75, 0.55, 0.6);
  double s2 = composite_score(0.60, 0.70, 0.6);
  double s3 = composite_score(0.80, 0.60, 0.6);
  bool scores_ok = std::fabs(s1 - 0.67) <= 1e-9 &&
                   std::fabs(s2 - 0.64) <= 1e-9 &&
                   std::fabs(s3 - 0.72) <= 1e-9;

  std::vector<ScoredVariant> pool = {make_scored("vA1", 40, 47, s1, "J_A"),
                                     make_scored("vA2", 47, 50, s2, "J_A"),
                                     make_scored("vB1", 40, 50, s3, "J_B")};
  ClearingResult result = select_best_compatible(pool);
  bool selection_ok = result.selected.size() == 2 &&
                      result.selected[0].variant.variant_id == "vA1" &&
                      result.selected[1].variant.variant_id == "vA2" &&
                      std::fabs(result.total_score - 1.31) <= 1e-9;
  double elapsed = ms_since(start);
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "scores %.2f/%.2f/%.2f, selected {vA1,vA2} total %.2f, %.3f ms",
                s1, s2, s3, result.total_score, elapsed);
  report(1, "golden example", scores_ok && selection_ok && elapsed < 1.0,
         detail);
}

// ---- 2. WIS optimality vs exhaustive search ------------------------------
void criterion_wis_optimality() {
  auto start = Clock::now();
  SplitMix64 rng(987654321);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int m = 1 + static_cast<int>(rng.next_u64() % 15);
    std::vector<ScoredVariant> pool;
    for (int i = 0; i < m; ++i) {
      Tick s = static_cast<Tick>(rng.next_u64() % 90);
      Tick len = 1 + static_cast<Tick>(rng.next_u64() % (100 - s));
      pool.push_back(
          make_scored("v" + std::to_string(i), s, s + len, rng.next_double()));
    }
    ClearingResult result = select_best_compatible(pool);
    std::int64_t dp = 0;
    for (const auto& sv : result.selected) dp += scaled_score(sv.score);
    if (dp != brute_force_wis(pool)) ++mismatches;
  }
  double elapsed = ms_since(start);
  char detail[128];
  std::snprintf(detail, sizeof(detail), "200 pools, %d mismatches, %.1f ms",
                mismatches, elapsed);
  report(2, "WIS optimality", mismatches == 0 && elapsed < 10000.0, detail);
}

// ---- 3. analytic safety vs Monte-Carlo -----------------------------------
void criterion_safety_oracle() {
  auto start = Clock::now();
  SplitMix64 rng(20240606);
  const int n_draws = 1000000;
  int violations = 0;
  for (int profile = 0; profile < 50; ++profile) {
    int n_segments = 1 + static_cast<int>(rng.next_u64() % 3);
    Fmp fmp;
    fmp.duration_mean = 10.0;
    double frac = 1.0 / n_segments;
    double top_mean = 0.0;
    for (int s = 0; s < n_segments; ++s) {
      double mean = 5.0 + 20.0 * rng.next_double();
      double std_dev = 0.5 + 4.0 * rng.next_double();
      fmp.segments.push_back(FmpSegment{frac, mean, std_dev});
      top_mean = std::max(top_mean, mean);
    }
    // capacity around the demand level so probabilities stay informative
    double capacity = top_mean + (-2.0 + 5.0 * rng.next_double());
    double analytic = prob_exceeds_capacity(fmp, capacity, 10);

    double estimate =
        jasda_test::mc_exceedance(fmp, capacity, rng.next_u64(), n_draws / 2);
    double se =
        std::sqrt(std::max(analytic * (1.0 - analytic), 1e-12) / n_draws);
    if (std::fabs(analytic - estimate) > 3.0 * se) ++violations;
  }
  double elapsed = ms_since(start);
  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "50 profiles x 1e6 draws, %d outside 3 SE, %.1f s", violations,
                elapsed / 1000.0);
  report(3, "safety oracle", violations == 0 && elapsed < 60000.0, detail);
}

// ---- 4. trust closed forms and monotonicity ------------------------------
void criterion_trust_closed_forms() {
  struct Case {
    double kappa, mean_error;
  };
  bool closed_ok = true;
  for (Case c : {Case{1.0, 1.0}, Case{2.0, 0.3}, Case{0.5, 0.0}}) {
    ReliabilityState state;
    VerificationRecord r;
    r.variant_error = c.mean_error;
    r.observed_utility = 0.5;
    state = update_reliability(state, r, c.kappa);
    state = update_reliability(state, r, c.kappa);
    if (std::fabs(state.rho - std::exp(-c.kappa * c.mean_error)) > 1e-6) {
      closed_ok = false;
    }
  }

  SplitMix64 rng(13579);
  int property_violations = 0;
  for (int sequence = 0; sequence < 1000; ++sequence) {
    ReliabilityState state;
    double kappa = 0.2 + 4.0 * rng.next_double();
    int n = 2 + static_cast<int>(rng.next_u64() % 10);
    for (int i = 0; i < n; ++i) {
      double error = rng.next_double();
      double prev_rho = state.rho;
      double prev_mean = state.mean_error;
      bool had = state.verified_count > 0;
      VerificationRecord r;
      r.variant_error = error;
      r.observed_utility = rng.next_double();
      state = update_reliability(state, r, kappa);
      if (!(state.rho > 0.0 && state.rho <= 1.0)) ++property_violations;
      if (had && error > prev_mean && !(state.rho < prev_rho)) {
        ++property_violations;
      }
      if (had && error < prev_mean && !(state.rho > prev_rho)) {
        ++property_violations;
      }
    }
  }
  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "closed forms %s, %d property violations over 1000 sequences",
                closed_ok ? "ok" : "WRONG", property_violations);
  report(4, "trust closed forms", closed_ok && property_violations == 0,
         detail);
}

// ---- 5. age term prevents starvation -------------------------------------
void criterion_fairness() {
  WorkloadConfig config = load_config(fixture_path("starvation.json"));
  SimulationResult aged = run_simulation(config, Policy::kJasda);
  WorkloadConfig no_age = config;
  no_age.policy.beta.back() = 0.0;
  SimulationResult flat = run_simulation(no_age, Policy::kJasda);

  double aged_wait =
      aged.metrics.at("per_job").at("J_low").at("max_wait").get<double>();
  double flat_wait =
      flat.metrics.at("per_job").at("J_low").at("max_wait").get<double>();
  bool aged_completed =
      !aged.metrics.at("per_job").at("J_low").at("jct").is_null();
  bool flat_completed =
      !flat.metrics.at("per_job").at("J_low").at("jct").is_null();
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "max wait %.0f (beta_age=0.3) vs %.0f (beta_age=0); "
                "completed %s vs %s",
                aged_wait, flat_wait, aged_completed ? "yes" : "no",
                flat_completed ? "yes" : "no");
  report(5, "fairness effect",
         aged_wait < flat_wait && aged_completed && !flat_completed, detail);
}

// ---- 6. per-window dominance over the greedy single pick -----------------
void criterion_dominance() {
  GeneratorSpec spec;
  spec.horizon = 1500;
  spec.arrival_rate = 0.035;
  spec.n_slices = 2;
  WorkloadConfig config = generate_workload(spec, 860226);
  SimulationResult jasda = run_simulation(config, Policy::kJasda);
  SimulationResult greedy = run_simulation(config, Policy::kGreedy);

  std::int64_t windows = jasda.metrics.at("windows_cleared").get<std::int64_t>();
  std::int64_t violations =
      jasda.metrics.at("dominance_violations").get<std::int64_t>();
  double util_jasda = jasda.metrics.at("utilization").get<double>();
  double util_greedy = greedy.metrics.at("utilization").get<double>();
  char detail[192];
  std::snprintf(detail, sizeof(detail),
                "%zu jobs, %lld windows, %lld dominance violations, "
                "utilization %.4f vs greedy %.4f",
                config.jobs.size(), static_cast<long long>(windows),
                static_cast<long long>(violations), util_jasda, util_greedy);
  report(6, "per-window dominance",
         config.jobs.size() >= 50 && windows > 0 && violations == 0 &&
             util_jasda >= util_greedy - 1e-12,
         detail);
}

// ---- 7. determinism and audit --------------------------------------------
void criterion_determinism_audit() {
  GeneratorSpec spec;
  spec.horizon = 1200;
  spec.arrival_rate = 0.03;
  spec.n_slices = 2;
  WorkloadConfig config = generate_workload(spec, 1111);
  SimulationResult a = run_simulation(config, Policy::kJasda);
  SimulationResult b = run_simulation(config, Policy::kJasda);
  bool hashes_equal = a.trace_hash == b.trace_hash;

  bool audit_ok = true;
  try {
    audit_trace(a.trace);
  } catch (const AuditError&) {
    audit_ok = false;
  }

  // inject an overlap into one commitment interval
  bool tamper_detected = false;
  std::vector<nlohmann::json> tampered = a.trace;
  for (auto& line : tampered) {
    if (line.value("type", "") != "iteration") continue;
    if (line.at("commits").empty()) continue;
    line.at("commits")[0]["end"] =
        line.at("commits")[0]["end"].get<Tick>() + 1000000;
    break;
  }
  try {
    audit_trace(tampered);
  } catch (const AuditError&) {
    tamper_detected = true;
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "hash %s == %s: %s; clean audit %s; tampered trace %s",
                a.trace_hash.c_str(), b.trace_hash.c_str(),
                hashes_equal ? "yes" : "no", audit_ok ? "ok" : "FAILED",
                tamper_detected ? "rejected" : "ACCEPTED");
  report(7, "determinism and audit",
         hashes_equal && audit_ok && tamper_detected, detail);
}

// ---- 8. clearing complexity smoke ----------------------------------------
std::vector<ScoredVariant> synthetic_pool(std::size_t m, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<ScoredVariant> pool;
  pool.reserve(m);
  const Tick span = 10000000;
  for (std::size_t i = 0; i < m; ++i) {
    Tick s = static_cast<Tick>(rng.next_u64() % (span - 1000));
    Tick len = 1 + static_cast<Tick>(rng.next_u64() % 1000);
    pool.push_back(
        make_scored("v" + std::to_string(i), s, s + len, rng.next_double()));
  }
  return pool;
}

double time_clearing(const std::vector<ScoredVariant>& pool) {
  double best = 1e18;
  for (int rep = 0; rep < 3; ++rep) {
    auto start = Clock::now();
    ClearingResult result = select_best_compatible(pool);
    double elapsed = ms_since(start);
    if (result.selected.empty()) std::printf("unexpected empty clearing\n");
    best = std::min(best, elapsed);
  }
  return best;
}

void criterion_complexity() {
  auto pool1 = synthetic_pool(100000, 5150);
  auto pool2 = synthetic_pool(200000, 5151);
  double t1 = time_clearing(pool1);
  double t2 = time_clearing(pool2);
  double ratio = t2 / t1;
  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "1e5 variants in %.1f ms, 2e5 in %.1f ms, ratio %.2f", t1, t2,
                ratio);
  report(8, "complexity smoke", t1 < 1000.0 && ratio < 3.0, detail);
}

// ---- 9. calibration convergence under biased declarations ----------------
void criterion_calibration() {
  WorkloadConfig config = load_config(fixture_path("calibration.json"));
  SimulationResult result = run_simulation(config, Policy::kJasda);

  std::vector<double> rho;
  std::vector<double> distance;
  std::size_t verifications_seen = 0;
  for (const auto& line : result.trace) {
    if (line.value("type", "") != "iteration") continue;
    for (const auto& bid : line.at("bids")) {
      if (verifications_seen >= 1 && distance.size() < verifications_seen) {
        distance.push_back(std::fabs(bid.at("h_hat").get<double>() -
                                     bid.at("hist_avg_at_bid").get<double>()));
      }
    }
    for (const auto& v : line.at("verifications")) {
      ++verifications_seen;
      rho.push_back(v.at("rho_after").get<double>());
    }
  }

  bool rho_ok = rho.size() >= 10;
  for (std::size_t i = 1; i < 10 && rho_ok; ++i) {
    if (!(rho[i] < rho[i - 1])) rho_ok = false;
  }
  bool distance_ok = distance.size() >= 10;
  for (std::size_t i = 1; i < 10 && distance_ok; ++i) {
    if (distance[i] > distance[i - 1] + 1e-12) distance_ok = false;
  }
  char detail[192];
  std::snprintf(detail, sizeof(detail),
                "rho %.4f -> %.4f over 10 verifications (strict: %s); "
                "|h_hat - HistAvg| %.4f -> %.4f (monotone: %s)",
                rho.empty() ? 0.0 : rho.front(),
                rho.size() >= 10 ? rho[9] : 0.0, rho_ok ? "yes" : "no",
                distance.empty() ? 0.0 : distance.front(),
                distance.size() >= 10 ? distance[9] : 0.0,
                distance_ok ? "yes" : "no");
  report(9, "calibration convergence", rho_ok && distance_ok, detail);
}

}  // namespace

int main() {
  criterion_golden_example();
  criterion_wis_optimality();
  criterion_safety_oracle();
  criterion_trust_closed_forms();
  criterion_fairness();
  criterion_dominance();
  criterion_determinism_audit();
  criterion_complexity();
  criterion_calibration();
  if (g_failures == 0) {
    std::printf("acceptance: all 9 criteria passed\n");
  } else {
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
