// Seeded, platform-independent random number generation.
//
// Scene generation must be byte-reproducible across runs and platforms, so
// everything here is fixed-width integer arithmetic with a documented
// recurrence; the host language's default RNG is never used.
//
// Stream generator: xorshift64* (Vigna 2016):
//   x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;  output = x * 0x2545F4914F6CDD1D
// Seeds are expanded through the splitmix64 finalizer so any 64-bit seed
// (including 0) yields a valid nonzero state.
#pragma once

#include <cstdint>

namespace dtsim {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Per-cycle seed derivation: decorrelates consecutive cycle indices while
// keeping the (seed, index) -> stream mapping stable across versions.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index + 1));
}

class Xorshift64Star {
public:
    explicit Xorshift64Star(std::uint64_t seed) : state_(splitmix64(seed)) {
        if (state_ == 0) state_ = 0x9E3779B97F4A7C15ull;
    }

    std::uint64_t next() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1Dull;
    }

    // Uniform in [0, 1) with 53 bits of mantissa.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). The modulo bias of ~n/2^64 is irrelevant for
    // scene synthesis and keeps the draw count per sample fixed.
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

    // Approximately standard normal via the Irwin-Hall 12-sum. Chosen over
    // Box-Muller so no libm transcendentals enter the reproducible stream.
    double gaussian() {
        double s = 0.0;
        for (int i = 0; i < 12; ++i) s += uniform();
        return s - 6.0;
    }

private:
    std::uint64_t state_;
};

} // namespace dtsim
