#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jasda/core.hpp"

namespace jasda {

// Outcome of clearing one window's bid pool.
struct ClearingResult {
  std::vector<ScoredVariant> selected;
  double total_score = 0.0;
  std::vector<std::string> rejected;
};

// Scores enter the dynamic program as decimal-scaled integers so that
// comparisons (and therefore the selected set) are identical on every
// platform.
std::int64_t scaled_score(double score);

// Maximum-total-score subset of pairwise non-overlapping variants
// (half-open intervals; touching endpoints are compatible). Classical
// weighted-interval-scheduling DP: sort by end time, binary-search the
// latest compatible predecessor, O(M log M).
//
// Ties between selections are broken deterministically: variants are
// canonically ordered by (end, score desc, older age_anchor, variant_id)
// and the DP prefers inclusion on equal value.
ClearingResult select_best_compatible(const std::vector<ScoredVariant>& pool);

// Highest-score single variant under the same tie-break; empty pool
// yields nullopt. Baseline "pick the single best bid".
std::optional<ScoredVariant> max_score_variant(
    const std::vector<ScoredVariant>& pool);

}  // namespace jasda
