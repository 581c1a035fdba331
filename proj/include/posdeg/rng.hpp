#pragma once

#include <cstdint>
#include <initializer_list>

namespace posdeg {

// SplitMix64 (Steele, Lea, Flood). Used both as a sequential generator and
// as the mixing function for counter-based streams: a draw is a pure
// function of (seed, stream ids...), so the order in which coordinates or
// edges are visited never changes a sample.

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return splitmix64_mix(state_);
    }

private:
    std::uint64_t state_;
};

/// Hashes a seed together with any number of stream identifiers.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) noexcept {
    std::uint64_t h = splitmix64_mix(seed + 0x9e3779b97f4a7c15ULL);
    for (std::uint64_t id : ids) h = splitmix64_mix(h ^ splitmix64_mix(id + 0x632be59bd9b4e019ULL));
    return h;
}

/// Uniform double in [0,1) with 53 random bits.
inline double unit_double(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// floor(bits * bound / 2^64): a value in [0, bound).
inline std::uint64_t scale_to(std::uint64_t bits, std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(bits) * bound) >> 64);
}

} // namespace posdeg
