#pragma once

#include <cmath>
#include <cstdint>

namespace rideshare {

// splitmix64 generator with hand-rolled distributions so that streams are
// reproducible bit-for-bit independent of the standard library in use.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [lo, hi] via rejection-free modulo over a wide range;
  // bias is negligible for the interval sizes used here and the stream stays
  // deterministic.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  // One standard normal draw per call (Box-Muller, cosine branch only).
  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

 private:
  std::uint64_t state_;
};

// Child seed for instance `index` of a batch; serial and parallel runs use
// the same derivation and therefore the same streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  Rng mix(seed ^ (0xA0761D6478BD642FULL * (index + 1)));
  mix.next_u64();
  return mix.next_u64();
}

}  // namespace rideshare
