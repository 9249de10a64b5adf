#include "jasda/timeline.hpp"

#include <algorithm>
#include <stdexcept>

namespace jasda {

void SliceTimeline::commit(const Commitment& commitment) {
  if (commitment.start >= commitment.end) {
    throw std::logic_error("timeline: empty or inverted interval");
  }
  if (!is_free(commitment.start, commitment.end)) {
    throw std::logic_error("timeline: overlapping commitment on slice " +
                           slice_.slice_id);
  }
  auto pos = std::lower_bound(
      commitments_.begin(), commitments_.end(), commitment.start,
      [](const Commitment& c, Tick start) { return c.start < start; });
  commitments_.insert(pos, commitment);
}

bool SliceTimeline::is_free(Tick start, Tick end) const {
  for (const auto& c : commitments_) {
    if (c.start >= end) break;
    if (c.end > start) return false;
  }
  return true;
}

std::vector<SliceTimeline::Gap> SliceTimeline::free_gaps(Tick from,
                                                         Tick to) const {
  std::vector<Gap> gaps;
  Tick cursor = from;
  for (const auto& c : commitments_) {
    if (c.end <= from) continue;
    if (c.start >= to) break;
    if (c.start > cursor) {
      gaps.push_back(Gap{cursor, std::min(c.start, to)});
    }
    cursor = std::max(cursor, c.end);
    if (cursor >= to) break;
  }
  if (cursor < to) {
    gaps.push_back(Gap{cursor, to});
  }
  return gaps;
}

Tick SliceTimeline::busy_ticks(Tick from, Tick to) const {
  Tick busy = 0;
  for (const auto& c : commitments_) {
    Tick lo = std::max(c.start, from);
    Tick hi = std::min(c.end, to);
    if (hi > lo) busy += hi - lo;
  }
  return busy;
}

}  // namespace jasda
