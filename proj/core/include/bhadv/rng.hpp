#pragma once

#include <cstdint>
#include <random>

namespace bhadv {

// All randomness in the library flows through explicitly seeded mt19937_64
// streams.  Replication r of a run with master seed s always uses
// make_stream(s, r), so results are reproducible independently of the thread
// count that executed the replications.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Derives an independent engine for (master_seed, stream_index).
inline std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t stream_index) {
  std::uint64_t s = master_seed;
  std::uint64_t a = splitmix64(s);
  s ^= stream_index * 0xD6E8FEB86659FD93ULL + 0x2545F4914F6CDD1DULL;
  std::uint64_t b = splitmix64(s);
  std::mt19937_64 engine(a ^ (b << 1));
  // A short warm-up decorrelates engines whose seeds differ in few bits.
  engine.discard(8);
  return engine;
}

// Uniform draw in the open interval (0,1); never returns 0 or 1.
inline double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Uniform integer in [0, n), n >= 1.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  // Rejection sampling keeps the distribution exactly uniform.
  const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace bhadv
