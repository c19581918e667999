#pragma once

#include <cstdint>

namespace schottky {

// Counter-based generator: the stream for sample `index` under `seed` is
// independent of scheduling, so parallel Monte Carlo runs reproduce
// bit-for-bit at any thread count.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t index) {
        state_ = mix(seed ^ mix(index + 0x9e3779b97f4a7c15ull));
        if (state_ == 0) state_ = 0x6a09e667f3bcc909ull;
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    // uniform in [0, 1)
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [a, b)
    double uniform(double a, double b) { return a + (b - a) * next_double(); }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint64_t state_;
};

} // namespace schottky
