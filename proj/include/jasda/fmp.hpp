#pragma once

#include <cstdint>
#include <vector>

#include "jasda/time.hpp"

namespace jasda {

// One phase of a memory profile: the segment spans `fraction` of the
// subjob's duration and its peak demand is normal(mem_mean, mem_std).
struct FmpSegment {
  double fraction = 1.0;
  double mem_mean_gb = 0.0;
  double mem_std_gb = 0.0;

  bool operator==(const FmpSegment&) const = default;
};

// Forecasted Memory Profile: a piecewise probabilistic descriptor of one
// subjob's execution. Segment peaks are independent normals; the duration
// is normal(duration_mean, duration_std) truncated to [1, inf).
struct Fmp {
  std::vector<FmpSegment> segments;
  double duration_mean = 1.0;
  double duration_std = 0.0;

  bool operator==(const Fmp&) const = default;
};

// Throws std::invalid_argument if fractions do not sum to 1 (1e-9), any
// segment mean/std is negative, or the duration parameters are invalid.
void validate_fmp(const Fmp& fmp);

// Rescales a job-level profile to a chunk of `nominal_work` ticks: the
// duration distribution scales preserving the coefficient of variation,
// memory segments are unchanged (same shape, shorter run).
Fmp scale_fmp(const Fmp& job_fmp, Tick nominal_work);

// Chosen quantile of the duration distribution, rounded up to whole
// ticks; monotone non-decreasing in the quantile.
Tick predict_duration(const Fmp& fmp, double quantile);

// P(max over segments of segment peak > capacity), evaluated in closed
// form as 1 - prod_s Phi((capacity - mean_s)/std_s). A zero-std segment
// contributes factor 1 when mean_s <= capacity, else 0.
double prob_exceeds_capacity(const Fmp& fmp, double capacity_gb,
                             Tick duration);

// Safe-by-construction check: exceedance probability at most theta.
bool is_safe(const Fmp& fmp, double capacity_gb, Tick duration, double theta);

// Ground truth produced when a committed variant runs.
struct RealizedExecution {
  Tick actual_duration = 0;
  std::vector<double> peak_mem_per_segment;
  std::vector<double> observed_features;
};

// Draws one realized execution: duration from the duration distribution
// truncated to >= 1, per-segment peaks truncated to >= 0. Deterministic
// for a given seed. observed_features is left empty; the engine fills it
// from the realized outcome.
RealizedExecution sample_execution(const Fmp& fmp, Tick committed_duration,
                                   std::uint64_t rng_seed);

}  // namespace jasda
