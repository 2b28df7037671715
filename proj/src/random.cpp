#include "ledspdc/random.hpp"

#include <cmath>

namespace ledspdc {

Pcg32::Pcg32(std::uint64_t init_state, std::uint64_t stream) : state_(0), inc_((stream << 1u) | 1u) {
  (*this)();
  state_ += init_state;
  (*this)();
}

Pcg32::result_type Pcg32::operator()() {
  const std::uint64_t old = state_;
  state_ = old * 6364136223846793005ULL + inc_;
  const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
  const auto rot = static_cast<std::uint32_t>(old >> 59u);
  return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
}

double Pcg32::uniform() {
  const std::uint64_t hi = (*this)();
  const std::uint64_t lo = (*this)();
  const std::uint64_t bits = ((hi << 32) | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

Pcg32 substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ splitmix64(a + 0x632BE59BD9B4E019ULL));
  h = splitmix64(h ^ splitmix64(b + 0x8CB92BA72F3D8DD7ULL));
  return Pcg32(h, splitmix64(h ^ 0xDA3E39CB94B95BDBULL));
}

namespace {

std::uint64_t poisson_inversion(Pcg32& rng, double lambda) {
  const double u = rng.uniform();
  double p = std::exp(-lambda);
  double cdf = p;
  std::uint64_t k = 0;
  // u can exceed the rounded total mass; the tail beyond k = 1000 is far below 2^-53 for lambda < 30.
  while (u > cdf && k < 1000) {
    ++k;
    p *= lambda / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

std::uint64_t poisson_ptrs(Pcg32& rng, double lambda) {
  const double slam = std::sqrt(lambda);
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -lambda + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

}  // namespace

std::uint64_t sample_poisson(Pcg32& rng, double lambda) {
  if (!(lambda > 0.0)) return 0;
  return lambda < 30.0 ? poisson_inversion(rng, lambda) : poisson_ptrs(rng, lambda);
}

}  // namespace ledspdc
