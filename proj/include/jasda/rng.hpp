#pragma once

#include <cstdint>
#include <string_view>

namespace jasda {

// SplitMix64: tiny, portable, identical sequences on every platform.
// All simulator randomness flows through this so traces are reproducible
// bit-for-bit regardless of standard-library distribution internals.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1): never returns an exact endpoint, safe for
  // inverse-CDF transforms.
  double next_open01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

std::uint64_t fnv1a64(std::string_view bytes);

// Derives an independent named sub-stream from a master seed. Components
// (arrivals, execution sampling, ...) each draw from their own stream so
// one can be regenerated without replaying the others.
std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                 std::string_view stream_name,
                                 std::uint64_t index = 0);

}  // namespace jasda
