#ifndef RESHUFFLE_RNG_HPP
#define RESHUFFLE_RNG_HPP

#include <cstdint>

namespace reshuffle {

// Counter-based generator (splitmix64). Seeding is cheap, so independent
// streams are derived per (run seed, epoch, purpose) instead of advancing
// one shared state. This keeps every epoch reproducible on its own.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Unbiased integer in [0, bound) by rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
};

// Derives an independent stream seed from (seed, a, b). Runs the inputs
// through the splitmix finalizer twice so related seeds do not collide.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a,
                                   std::uint64_t b = 0) {
  SplitMix64 g(seed ^ (a * 0xd6e8feb86659fd93ULL) ^
               (b * 0xa5cb3a1d3c4f5b21ULL));
  std::uint64_t s = g.next();
  return s ^ g.next();
}

}  // namespace reshuffle

#endif
