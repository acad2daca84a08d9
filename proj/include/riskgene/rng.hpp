#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>

namespace riskgene {

// Reproducibility is an external contract of this toolkit, so the generator
// is a fixed, named algorithm rather than a platform default:
//
//   * stream seeding / mixing:  SplitMix64 (Steele, Lea, Flood 2014)
//   * main generator:           xoshiro256++ (Blackman, Vigna 2019)
//   * bounded integers:         Lemire multiply-shift with rejection
//   * doubles in [0,1):         top 53 bits / 2^53
//
// All of these are bit-exact by construction; the same seed yields the same
// draw sequence on every supported platform and in every release.

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Seed for replicate k of a run keyed by master_seed. One SplitMix64 step on
// master_seed + (k+1)*gamma; the finalizer is a bijection and the offsets are
// distinct for distinct k, so distinct replicates never share a stream.
inline std::uint64_t derive_replicate_seed(std::uint64_t master_seed, std::uint64_t replicate_index) {
    std::uint64_t state = master_seed + replicate_index * 0x9E3779B97F4A7C15ULL;
    return splitmix64_next(state);
}

class Xoshiro256PlusPlus {
public:
    explicit Xoshiro256PlusPlus(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = std::rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = std::rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, bound). bound must be nonzero.
    std::uint64_t next_below(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform double in [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::array<std::uint64_t, 4> state_;
};

// In-place Fisher-Yates shuffle; uniform over permutations.
template <typename T>
void fisher_yates(std::span<T> values, Xoshiro256PlusPlus& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(values[i - 1], values[j]);
    }
}

}  // namespace riskgene
