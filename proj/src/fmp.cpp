#include "jasda/fmp.hpp"

#include <cmath>
#include <stdexcept>

#include "jasda/stats.hpp"

namespace jasda {

void validate_fmp(const Fmp& fmp) {
  if (fmp.segments.empty()) {
    throw std::invalid_argument("fmp has no segments");
  }
  double frac_sum = 0.0;
  for (const auto& seg : fmp.segments) {
    if (seg.fraction <= 0.0 || seg.fraction > 1.0) {
      throw std::invalid_argument("fmp segment fraction out of range");
    }
    if (seg.mem_mean_gb < 0.0) {
      throw std::invalid_argument("fmp segment mem_mean negative");
    }
    if (seg.mem_std_gb < 0.0) {
      throw std::invalid_argument("fmp segment mem_std negative");
    }
    frac_sum += seg.fraction;
  }
  if (std::fabs(frac_sum - 1.0) > 1e-9) {
    throw std::invalid_argument("fmp segment fractions do not sum to 1");
  }
  if (!(fmp.duration_mean > 0.0)) {
    throw std::invalid_argument("fmp duration_mean not positive");
  }
  if (fmp.duration_std < 0.0) {
    throw std::invalid_argument("fmp duration_std negative");
  }
}

Fmp scale_fmp(const Fmp& job_fmp, Tick nominal_work) {
  if (nominal_work <= 0) {
    throw std::invalid_argument("scale_fmp: nominal_work not positive");
  }
  Fmp scaled = job_fmp;
  double cv = job_fmp.duration_std / job_fmp.duration_mean;
  scaled.duration_mean = static_cast<double>(nominal_work);
  scaled.duration_std = cv * static_cast<double>(nominal_work);
  return scaled;
}

Tick predict_duration(const Fmp& fmp, double quantile) {
  if (!(quantile > 0.0 && quantile < 1.0)) {
    throw std::invalid_argument("predict_duration: quantile out of range");
  }
  validate_fmp(fmp);
  double q =
      truncated_normal_quantile(fmp.duration_mean, fmp.duration_std, 1.0,
                                quantile);
  Tick ticks = static_cast<Tick>(std::ceil(q));
  return ticks < 1 ? 1 : ticks;
}

double prob_exceeds_capacity(const Fmp& fmp, double capacity_gb,
                             Tick duration) {
  if (duration <= 0) {
    throw std::invalid_argument("prob_exceeds_capacity: duration not positive");
  }
  validate_fmp(fmp);
  double prob_all_within = 1.0;
  for (const auto& seg : fmp.segments) {
    double factor;
    if (seg.mem_std_gb == 0.0) {
      factor = seg.mem_mean_gb <= capacity_gb ? 1.0 : 0.0;
    } else {
      factor = normal_cdf((capacity_gb - seg.mem_mean_gb) / seg.mem_std_gb);
    }
    prob_all_within *= factor;
  }
  double p = 1.0 - prob_all_within;
  if (p < 0.0) p = 0.0;
  if (p > 1.0) p = 1.0;
  return p;
}

bool is_safe(const Fmp& fmp, double capacity_gb, Tick duration, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument("is_safe: theta out of range");
  }
  return prob_exceeds_capacity(fmp, capacity_gb, duration) <= theta;
}

RealizedExecution sample_execution(const Fmp& fmp, Tick committed_duration,
                                   std::uint64_t rng_seed) {
  if (committed_duration <= 0) {
    throw std::invalid_argument("sample_execution: duration not positive");
  }
  validate_fmp(fmp);
  SplitMix64 rng(rng_seed);
  RealizedExecution exec;
  double d = sample_truncated_normal(rng, fmp.duration_mean, fmp.duration_std,
                                     1.0);
  exec.actual_duration = static_cast<Tick>(std::llround(d));
  if (exec.actual_duration < 1) exec.actual_duration = 1;
  exec.peak_mem_per_segment.reserve(fmp.segments.size());
  for (const auto& seg : fmp.segments) {
    exec.peak_mem_per_segment.push_back(
        sample_truncated_normal(rng, seg.mem_mean_gb, seg.mem_std_gb, 0.0));
  }
  return exec;
}

}  // namespace jasda
