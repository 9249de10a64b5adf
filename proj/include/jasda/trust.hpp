#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace jasda {

// Ex-post comparison of one executed variant's declared features against
// the observed ground truth. observed_utility is the job utility
// recomputed on the observed feature values, used to advance HistAvg.
struct VerificationRecord {
  std::string variant_id;
  std::string job_id;
  std::vector<double> per_feature_error;
  double variant_error = 0.0;
  double observed_utility = 0.0;
  std::int64_t verified_at = 0;
};

// Per-job trust state.
//
// hist_avg starts life seeded from the job's first declaration (the
// cold-start placeholder, making the first calibration the identity) and
// switches to an EWMA over observed-outcome utilities once verifications
// exist. rho = exp(-kappa * mean_error) with mean_error the running
// arithmetic mean of variant errors over all verified variants.
struct ReliabilityState {
  std::string job_id;
  double hist_avg = 0.0;
  bool hist_seeded = false;
  double mean_error = 0.0;
  std::int64_t verified_count = 0;
  double rho = 1.0;
};

inline constexpr double kHistAvgSmoothing = 0.2;

// Seeds hist_avg from the job's first declared utility; later calls are
// no-ops once any anchor exists.
void note_declaration(ReliabilityState& state, double h_tilde);

// Blends the declared utility with the historical baseline. Verified
// jobs blend with weight rho; unverified jobs blend with gamma against
// the (declaration-seeded) baseline, which makes the very first
// calibration the identity.
double calibrate(double h_tilde, const ReliabilityState& state, double gamma);

// Elementwise |declared - observed|; throws on dimension mismatch.
std::vector<double> per_feature_error(const std::vector<double>& declared,
                                      const std::vector<double>& observed);

// Convex aggregation of per-feature errors; weights must sum to 1.
double variant_error(const std::vector<double>& per_feature,
                     const std::vector<double>& weights);

// Drops weights of unobserved features and rescales the rest to sum 1.
// Throws if the mask leaves no observed feature.
std::vector<double> renormalize_weights(const std::vector<double>& weights,
                                        const std::vector<bool>& observed);

// Folds one verification into the state: running-mean error, rho
// recomputation, verified_count increment, and the HistAvg EWMA step
// (restarting at the first observed utility).
ReliabilityState update_reliability(const ReliabilityState& state,
                                    const VerificationRecord& record,
                                    double kappa);

}  // namespace jasda
