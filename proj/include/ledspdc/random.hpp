#pragma once

#include <cstdint>
#include <limits>

namespace ledspdc {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Used to derive substream keys.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// PCG32 (pcg_setseq_64_xsh_rr_32, O'Neill 2014). Satisfies UniformRandomBitGenerator.
class Pcg32 {
 public:
  using result_type = std::uint32_t;

  Pcg32(std::uint64_t init_state, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 1;
};

/// Independent generator for (seed, a, b), e.g. (master seed, setting index, repeat index).
/// The stream does not depend on the order in which substreams are requested.
Pcg32 substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Poisson(lambda) variate. Sequential-search inversion for lambda < 30, Hoermann's
/// PTRS transformed rejection otherwise. lambda <= 0 returns 0.
std::uint64_t sample_poisson(Pcg32& rng, double lambda);

}  // namespace ledspdc
