#include "jasda/clearing.hpp"

#include <algorithm>
#include <cmath>

namespace jasda {

namespace {

constexpr double kScoreScale = 1e9;

// Preference used for equal-value decisions: higher score first, then
// longer-waiting job, then lexicographically smaller variant id.
bool prefer_before(const ScoredVariant& a, const ScoredVariant& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.age_anchor != b.age_anchor) return a.age_anchor < b.age_anchor;
  return a.variant.variant_id < b.variant.variant_id;
}

bool canonical_order(const ScoredVariant& a, const ScoredVariant& b) {
  if (a.variant.end() != b.variant.end()) {
    return a.variant.end() < b.variant.end();
  }
  return prefer_before(a, b);
}

}  // namespace

std::int64_t scaled_score(double score) {
  return static_cast<std::int64_t>(std::llround(score * kScoreScale));
}

ClearingResult select_best_compatible(const std::vector<ScoredVariant>& pool) {
  ClearingResult result;
  if (pool.empty()) {
    return result;
  }

  std::vector<ScoredVariant> sorted = pool;
  std::sort(sorted.begin(), sorted.end(), canonical_order);

  const std::size_t m = sorted.size();
  std::vector<Tick> ends(m);
  for (std::size_t i = 0; i < m; ++i) {
    ends[i] = sorted[i].variant.end();
  }

  // pred[i]: index of the latest variant (in canonical order) ending at or
  // before sorted[i]'s start, or -1. Half-open intervals make end == start
  // compatible.
  std::vector<std::ptrdiff_t> pred(m);
  for (std::size_t i = 0; i < m; ++i) {
    Tick start = sorted[i].variant.t_start;
    auto it = std::upper_bound(ends.begin(), ends.end(), start);
    pred[i] = static_cast<std::ptrdiff_t>(it - ends.begin()) - 1;
  }

  // best[i]: optimal scaled total over the first i variants.
  std::vector<std::int64_t> best(m + 1, 0);
  std::vector<bool> take(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    std::int64_t with =
        scaled_score(sorted[i].score) + best[static_cast<std::size_t>(pred[i] + 1)];
    std::int64_t without = best[i];
    if (with >= without) {
      best[i + 1] = with;
      take[i] = true;
    } else {
      best[i + 1] = without;
    }
  }

  std::vector<std::size_t> chosen;
  for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(m) - 1; i >= 0;) {
    if (take[static_cast<std::size_t>(i)]) {
      chosen.push_back(static_cast<std::size_t>(i));
      i = pred[static_cast<std::size_t>(i)];
    } else {
      --i;
    }
  }
  std::reverse(chosen.begin(), chosen.end());

  std::vector<bool> selected_mask(m, false);
  for (std::size_t idx : chosen) {
    selected_mask[idx] = true;
    result.selected.push_back(sorted[idx]);
    result.total_score += sorted[idx].score;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!selected_mask[i]) {
      result.rejected.push_back(sorted[i].variant.variant_id);
    }
  }
  return result;
}

std::optional<ScoredVariant> max_score_variant(
    const std::vector<ScoredVariant>& pool) {
  if (pool.empty()) {
    return std::nullopt;
  }
  const ScoredVariant* best = &pool.front();
  for (const auto& candidate : pool) {
    if (prefer_before(candidate, *best)) {
      best = &candidate;
    }
  }
  return *best;
}

}  // namespace jasda
