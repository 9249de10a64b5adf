#include "jasda/scoring.hpp"

#include <algorithm>
#include <stdexcept>

namespace jasda {

namespace {
double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }
}  // namespace

double normalize_jct(Tick delta_jct, Tick delta_jct_max) {
  if (delta_jct_max <= 0) {
    throw std::invalid_argument("normalize_jct: delta_jct_max not positive");
  }
  if (delta_jct < 0) {
    throw std::invalid_argument("normalize_jct: delta_jct negative");
  }
  return clamp01(1.0 - static_cast<double>(delta_jct) /
                           static_cast<double>(delta_jct_max));
}

double normalize_energy(double energy, double energy_max) {
  if (!(energy_max > 0.0)) {
    throw std::invalid_argument("normalize_energy: energy_max not positive");
  }
  if (energy < 0.0) {
    throw std::invalid_argument("normalize_energy: energy negative");
  }
  return clamp01(1.0 - energy / energy_max);
}

double qos_indicator(bool meets) { return meets ? 1.0 : 0.0; }

double mem_headroom(const Fmp& fmp, double capacity_gb, Tick duration) {
  if (!(capacity_gb > 0.0)) {
    throw std::invalid_argument("mem_headroom: capacity not positive");
  }
  if (duration <= 0) {
    throw std::invalid_argument("mem_headroom: duration not positive");
  }
  validate_fmp(fmp);
  double acc = 0.0;
  for (const auto& seg : fmp.segments) {
    acc += seg.fraction *
           clamp01((capacity_gb - seg.mem_mean_gb) / capacity_gb);
  }
  return clamp01(acc);
}

double job_utility(const std::vector<double>& features,
                   const std::vector<double>& alpha) {
  if (features.size() != alpha.size()) {
    throw std::invalid_argument("job_utility: dimension mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    acc += alpha[i] * features[i];
  }
  return clamp01(acc);
}

double system_utility(const std::vector<double>& features,
                      const std::vector<double>& beta, double age) {
  if (beta.size() != features.size() + 1) {
    throw std::invalid_argument("system_utility: dimension mismatch");
  }
  if (!(age >= 0.0 && age <= 1.0)) {
    throw std::invalid_argument("system_utility: age out of range");
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < features.size(); ++j) {
    acc += beta[j] * features[j];
  }
  acc += beta.back() * age;
  return clamp01(acc);
}

double age_factor(const JobRuntimeState& state, Tick now, Tick age_horizon) {
  if (age_horizon <= 0) {
    throw std::invalid_argument("age_factor: age_horizon not positive");
  }
  if (now < state.t_last_scheduled) {
    throw std::invalid_argument("age_factor: now precedes last scheduling");
  }
  double wait = static_cast<double>(now - state.t_last_scheduled);
  return std::min(1.0, wait / static_cast<double>(age_horizon));
}

double composite_score(double h_hat, double f_sys_tilde, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("composite_score: lambda out of range");
  }
  return lambda * h_hat + (1.0 - lambda) * f_sys_tilde;
}

}  // namespace jasda
