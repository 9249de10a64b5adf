#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "jasda/clearing.hpp"
#include "jasda/core.hpp"
#include "jasda/rng.hpp"

namespace jasda_test {

// Box-Muller normal draws on top of SplitMix64 uniforms. Deliberately a
// different construction from the library's inverse-CDF path so that
// Monte-Carlo checks are independent of the code they validate.
class BoxMuller {
 public:
  explicit BoxMuller(std::uint64_t seed) : rng_(seed) {}

  double next_standard() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = rng_.next_open01();
    double u2 = rng_.next_open01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double next(double mean, double std_dev) {
    return mean + std_dev * next_standard();
  }

 private:
  jasda::SplitMix64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Antithetic Monte-Carlo estimate of P(max_s peak_s > capacity) with
// independent normal segment peaks. Draws n_pairs (z, -z) pairs, so the
// estimate uses 2 * n_pairs samples at below-binomial variance.
inline double mc_exceedance(const jasda::Fmp& fmp, double capacity,
                            std::uint64_t seed, int n_pairs) {
  BoxMuller normals(seed);
  long long exceed = 0;
  std::vector<double> z(fmp.segments.size());
  for (int d = 0; d < n_pairs; ++d) {
    for (std::size_t s = 0; s < fmp.segments.size(); ++s) {
      z[s] = normals.next_standard();
    }
    for (double sign : {1.0, -1.0}) {
      for (std::size_t s = 0; s < fmp.segments.size(); ++s) {
        const auto& seg = fmp.segments[s];
        if (seg.mem_mean_gb + sign * z[s] * seg.mem_std_gb > capacity) {
          ++exceed;
          break;
        }
      }
    }
  }
  return static_cast<double>(exceed) / (2.0 * n_pairs);
}

inline jasda::ScoredVariant make_scored(const std::string& id,
                                        jasda::Tick start, jasda::Tick end,
                                        double score,
                                        const std::string& job = "J") {
  jasda::ScoredVariant sv;
  sv.variant.variant_id = id;
  sv.variant.job_id = job;
  sv.variant.slice_id = "s1";
  sv.variant.t_start = start;
  sv.variant.predicted_duration = end - start;
  sv.variant.nominal_work = end - start;
  sv.score = score;
  sv.h_hat = score;
  sv.h_tilde = score;
  sv.f_sys_tilde = score;
  return sv;
}

// Exhaustive weighted-interval-scheduling optimum over all 2^M subsets,
// on the same integer score scale the DP uses.
inline std::int64_t brute_force_wis(const std::vector<jasda::ScoredVariant>& pool) {
  const std::size_t m = pool.size();
  std::int64_t best = 0;
  for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    bool feasible = true;
    std::int64_t total = 0;
    for (std::size_t i = 0; i < m && feasible; ++i) {
      if (!(mask & (1ULL << i))) continue;
      total += jasda::scaled_score(pool[i].score);
      for (std::size_t j = i + 1; j < m && feasible; ++j) {
        if (!(mask & (1ULL << j))) continue;
        jasda::Tick a0 = pool[i].variant.t_start;
        jasda::Tick a1 = pool[i].variant.end();
        jasda::Tick b0 = pool[j].variant.t_start;
        jasda::Tick b1 = pool[j].variant.end();
        if (a0 < b1 && b0 < a1) feasible = false;  // half-open overlap
      }
    }
    if (feasible && total > best) best = total;
  }
  return best;
}

}  // namespace jasda_test
