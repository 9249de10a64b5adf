#pragma once

#include <string>
#include <vector>

#include "jasda/core.hpp"
#include "jasda/fmp.hpp"

namespace jasda {

// Per-job state the age term feeds on. t_last_scheduled is the time any
// variant of the job was last committed, or the arrival time if never.
struct JobRuntimeState {
  std::string job_id;
  Tick arrival_time = 0;
  Tick t_last_scheduled = 0;
  Tick remaining_work = 0;
};

// Raw-feature normalizers. All clamp into [0,1] even when the raw input
// exceeds its declared maximum.
double normalize_jct(Tick delta_jct, Tick delta_jct_max);
double normalize_energy(double energy, double energy_max);
double qos_indicator(bool meets);

// Duration-weighted expected headroom over the profile's segments,
// clamped per segment into [0,1].
double mem_headroom(const Fmp& fmp, double capacity_gb, Tick duration);

// h~(v) = sum_i alpha_i * phi_i(v); in [0,1] when sum(alpha) <= 1.
double job_utility(const std::vector<double>& features,
                   const std::vector<double>& alpha);

// f~sys(v) = sum_j beta_j * psi_j(v) + beta_age * age, with beta_age the
// last entry of beta (beta.size() == features.size() + 1).
double system_utility(const std::vector<double>& features,
                      const std::vector<double>& beta, double age);

// Linear saturating age: min(1, wait / age_horizon).
double age_factor(const JobRuntimeState& state, Tick now, Tick age_horizon);

// Score(v) = lambda * h_hat + (1 - lambda) * f_sys_tilde.
double composite_score(double h_hat, double f_sys_tilde, double lambda);

}  // namespace jasda
