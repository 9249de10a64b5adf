#include "jasda/rng.hpp"

namespace jasda {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                 std::string_view stream_name,
                                 std::uint64_t index) {
  SplitMix64 mixer(master_seed ^ fnv1a64(stream_name) ^
                   (index * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL));
  return mixer.next_u64();
}

}  // namespace jasda
