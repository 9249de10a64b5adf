#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jasda/core.hpp"
#include "jasda/fmp.hpp"

namespace jasda {

enum class BidStrategy {
  kGreedyFill,  // chunk the window into tau_min-respecting pieces
  kSingleSpan,  // one variant spanning the whole remaining need
};

std::string to_string(BidStrategy strategy);
BidStrategy bid_strategy_from_string(const std::string& name);

// Static description of one job as read from the workload file.
struct JobSpec {
  std::string job_id;
  Tick arrival = 0;
  Tick total_work = 0;
  Fmp fmp;
  std::optional<Tick> qos_deadline;
  double declared_bias = 0.0;
  BidStrategy strategy = BidStrategy::kGreedyFill;
  int max_variants = 2;

  bool operator==(const JobSpec&) const = default;
};

// A full simulation input: slices, jobs, policy, horizon, normalization
// constants and the master seed.
struct WorkloadConfig {
  int schema_version = 1;
  Tick horizon = 0;
  std::uint64_t seed = 0;
  Tick delta_jct_max = 1;
  double e_max = 1.0;
  double duration_quantile = 0.9;
  // Gaps whose start lies beyond now + lead_time + announce_lookahead are
  // not announced yet; < 0 means unbounded (announce anywhere in horizon).
  Tick announce_lookahead = -1;
  std::vector<SliceSpec> slices;
  std::vector<JobSpec> jobs;
  PolicyParams policy;

  bool operator==(const WorkloadConfig& other) const;
};

// Strict JSON parsing: unknown keys are rejected, all embedded type
// invariants are validated; violations raise ConfigError naming the
// field path.
WorkloadConfig parse_config(const std::string& json_text);
WorkloadConfig load_config(const std::string& path);

std::string write_config(const WorkloadConfig& config);
void save_config(const WorkloadConfig& config, const std::string& path);

// Knobs for the synthetic workload generator.
struct GeneratorSpec {
  Tick horizon = 2000;
  double arrival_rate = 0.02;  // jobs per tick (Poisson)
  int n_slices = 2;
  double capacity_min_gb = 10.0;
  double capacity_max_gb = 40.0;
  Tick work_min = 8;
  Tick work_max = 60;
  double duration_cv_max = 0.15;
  double qos_probability = 0.3;
};

// Seeded Poisson arrivals with job shapes drawn from the generator
// ranges. Deterministic per seed; rate 0 yields an empty job list.
WorkloadConfig generate_workload(const GeneratorSpec& spec,
                                 std::uint64_t seed);

}  // namespace jasda
