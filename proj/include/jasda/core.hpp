#pragma once

#include <string>
#include <vector>

#include "jasda/fmp.hpp"
#include "jasda/time.hpp"

namespace jasda {

// One MIG slice. Capacity is fixed for the whole horizon.
struct SliceSpec {
  std::string slice_id;
  double capacity_gb = 0.0;

  bool operator==(const SliceSpec&) const = default;
};

// An announced idle time-capacity region on one slice: the auction lot.
// Covers [t_min, t_min + delta_t).
struct Window {
  std::string slice_id;
  double capacity_gb = 0.0;
  Tick t_min = 0;
  Tick delta_t = 0;

  Tick end() const { return t_min + delta_t; }
};

// Every tunable policy symbol in one bundle.
//
//   lambda                job-side vs system-side weight in the composite
//   alpha                 job-feature weights (sum <= 1)
//   beta                  system-feature weights, beta_age stored last
//                         (participates in the sum <= 1 constraint)
//   theta                 memory-exceedance probability bound
//   tau_min               minimum subjob duration, ticks
//   gamma                 cold-start calibration blend
//   kappa                 reliability decay sensitivity
//   verification_weights  convex weights for per-variant error aggregation
//   age_horizon           ticks until the age factor saturates at 1
//   lead_time             announcement-to-start offset, ticks
struct PolicyParams {
  double lambda = 0.5;
  std::vector<double> alpha;
  std::vector<double> beta;
  double theta = 0.05;
  Tick tau_min = 1;
  double gamma = 1.0;
  double kappa = 1.0;
  std::vector<double> verification_weights;
  Tick age_horizon = 100;
  Tick lead_time = 0;

  bool operator==(const PolicyParams&) const = default;
};

// Checks every PolicyParams invariant; returns the params unchanged or
// throws std::invalid_argument naming the first violated invariant.
PolicyParams validate_policy(const PolicyParams& params);

// A bid: one candidate subjob targeted at an announced window.
// nominal_work is the work content in ticks; predicted_duration is the
// committed footprint (quantile of the variant's duration distribution,
// >= nominal_work for quantiles >= 0.5). The profile is the variant's
// own descriptor, scaled from the job-level one.
struct Variant {
  std::string variant_id;
  std::string job_id;
  std::string slice_id;
  Tick t_start = 0;
  Tick predicted_duration = 0;
  Tick nominal_work = 0;
  Fmp fmp;
  std::vector<double> declared_features;

  Tick end() const { return t_start + predicted_duration; }
};

// A variant with its normalized utilities and composite score attached.
// age_anchor carries the owning job's last-scheduled time for the
// deterministic clearing tie-break (older waits win ties).
struct ScoredVariant {
  Variant variant;
  double h_tilde = 0.0;
  double f_sys_tilde = 0.0;
  double h_hat = 0.0;
  double score = 0.0;
  Tick age_anchor = 0;
};

// A cleared variant committed to a slice over [start, end).
struct Commitment {
  std::string variant_id;
  std::string job_id;
  std::string slice_id;
  Tick start = 0;
  Tick end = 0;
  std::int64_t committed_at = 0;
};

}  // namespace jasda
