#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

namespace mssc {

// Deterministic, platform-independent PRNG used everywhere randomness is
// needed. xoshiro256** with splitmix64 seeding; bounded draws use masked
// rejection so results are identical across compilers and platforms
// (std::uniform_int_distribution is not).
inline constexpr const char* kRngName = "xoshiro256ss/v1";

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Seed for an independent stream identified by (master seed, index);
// distinct indexes give uncorrelated streams for all practical purposes.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t a = master_seed;
    std::uint64_t b = index + 0x632BE59BD9B4E019ULL;
    return splitmix64(a) ^ splitmix64(b);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    static Rng stream(std::uint64_t master_seed, std::uint64_t stream_index) {
        return Rng(derive_seed(master_seed, stream_index));
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform draw from [0, n), unbiased.
    std::uint64_t bounded(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("bounded: n must be positive");
        std::uint64_t mask = n - 1;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        mask |= mask >> 32;
        for (;;) {
            const std::uint64_t r = next() & mask;
            if (r < n) return r;
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_;
};

}  // namespace mssc
