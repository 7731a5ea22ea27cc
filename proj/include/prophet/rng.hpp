#pragma once

#include <array>
#include <cstdint>

namespace prophet {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// Keyed random stream (xoshiro256++ seeded through splitmix64) with
// deterministic substream derivation.
//
// substream(tag) derives from the stream's key, never from its evolving
// state, so a substream is a pure function of (root seed, path of tags).
// Monte Carlo trials, threshold draws, value draws and tie-break ranks each
// take their own tag; the resulting streams never share state.
class RngStream {
public:
    explicit RngStream(std::uint64_t key) : key_(key) {
        std::uint64_t s = key;
        for (auto& word : state_) word = detail::splitmix64(s);
    }

    RngStream substream(std::uint64_t tag) const {
        std::uint64_t s = key_ ^ (0xD1B54A32D192ED03ULL * (tag + 1));
        std::uint64_t mixed = detail::splitmix64(s);
        return RngStream(detail::splitmix64(mixed));
    }

    std::uint64_t key() const { return key_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl64(state_[3], 45);
        return result;
    }

    // Uniform draw in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Unbiased uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

private:
    std::uint64_t key_;
    std::array<std::uint64_t, 4> state_{};
};

}  // namespace prophet
