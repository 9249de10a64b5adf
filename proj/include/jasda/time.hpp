#pragma once

#include <cstdint>

namespace jasda {

// Time is integer ticks throughout; intervals are half-open [start, end),
// so a variant ending at t is compatible with one starting at t.
using Tick = std::int64_t;

}  // namespace jasda
