#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace mqg {

/// One step of SplitMix64 (Steele, Lea & Flood). Advances `state` and returns
/// the next output. Used for seed expansion and stream derivation so that
/// results are identical across platforms and standard-library versions.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Derives the seed of a numbered stream from a base seed. The stream id is
/// folded into the SplitMix64 state via a golden-ratio multiple, then two
/// outputs are mixed; distinct (base, stream) pairs give uncorrelated seeds.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t s = base + 0x9E3779B97F4A7C15ull * (stream + 1);
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1 | b >> 63);
}

/// xoshiro256++ (Blackman & Vigna). Seeded by expanding a 64-bit seed with
/// SplitMix64, per the authors' recommendation.
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double strictly inside (0, 1): 53 random bits offset by half an ulp.
    double next_unit() {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound) without modulo bias (Lemire reduction).
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>((*this)()) * bound) >> 64);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

struct GaussianPair {
    double z0;
    double z1;
};

/// Box-Muller transform; consumes exactly two uniforms per call, so the
/// stream position is a pure function of how many pairs were drawn.
inline GaussianPair next_gaussian_pair(Xoshiro256pp& rng) {
    const double u1 = rng.next_unit();
    const double u2 = rng.next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

} // namespace mqg
