#pragma once

#include <string>
#include <vector>

#include "jasda/core.hpp"

namespace jasda {

// Committed occupancy of one slice: an ordered set of disjoint half-open
// intervals. Insertion rejects overlap; touching endpoints are fine.
class SliceTimeline {
 public:
  explicit SliceTimeline(SliceSpec slice) : slice_(std::move(slice)) {}

  const SliceSpec& slice() const { return slice_; }
  const std::vector<Commitment>& commitments() const { return commitments_; }

  // Inserts keeping start order; throws std::logic_error on overlap.
  void commit(const Commitment& commitment);

  // True when [start, end) does not intersect any commitment.
  bool is_free(Tick start, Tick end) const;

  // Maximal idle intervals within [from, to), in increasing start order.
  struct Gap {
    Tick start = 0;
    Tick end = 0;
    Tick length() const { return end - start; }
  };
  std::vector<Gap> free_gaps(Tick from, Tick to) const;

  // Total committed ticks intersected with [from, to).
  Tick busy_ticks(Tick from, Tick to) const;

 private:
  SliceSpec slice_;
  std::vector<Commitment> commitments_;  // sorted by start, disjoint
};

}  // namespace jasda
