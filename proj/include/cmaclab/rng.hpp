#pragma once

#include <cstdint>
#include <random>

namespace cmaclab {

// Finalizer from the splitmix64 generator. Used to whiten (seed, domain,
// index) triples into engine seeds so every trial and batch draw gets its own
// stream, independent of how many streams a run creates.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Stream families. Keeping the solver's common-random-number batch separate
// from the estimation trials makes the final estimate an out-of-sample check
// of the solved multipliers.
enum class StreamDomain : std::uint64_t {
  solve_batch = 1,
  trial = 2,
  check = 3,
  validate = 4,
};

inline std::mt19937_64 make_stream(std::uint64_t seed, StreamDomain domain,
                                   std::uint64_t index) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ static_cast<std::uint64_t>(domain));
  s = splitmix64(s ^ index);
  return std::mt19937_64(s);
}

}  // namespace cmaclab
