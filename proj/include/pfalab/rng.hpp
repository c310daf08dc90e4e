#ifndef PFALAB_RNG_HPP
#define PFALAB_RNG_HPP

#include <cstdint>
#include <limits>

#include "pfalab/bytes.hpp"

namespace pfalab {

/// SplitMix64 finalizer. Used for seeding and for deriving independent
/// per-trial streams from a master seed.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Seed of stream `index` under `master`. Distinct indices give unrelated
/// streams; the mapping never changes across versions.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept
{
    std::uint64_t s = master ^ (0xD1B54A32D192ED03ull * (index + 1));
    splitmix64(s);
    return splitmix64(s);
}

/// xoshiro256** 1.0 (Blackman & Vigna), state filled from SplitMix64.
/// This is the only generator the library uses; results are reproducible
/// bit-for-bit from the seed. Satisfies UniformRandomBitGenerator.
class Rng {
public:
    using result_type = std::uint64_t;

    static constexpr const char* kAlgorithm = "xoshiro256**/splitmix64";

    explicit Rng(std::uint64_t seed) noexcept
    {
        std::uint64_t sm = seed;
        for (auto& word : s_)
            word = splitmix64(sm);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /* Unbiased integer in [0, bound) (Lemire's multiply-and-reject). bound > 0. */
    std::uint64_t below(std::uint64_t bound) noexcept
    {
        unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>((*this)()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    Byte byte() noexcept { return static_cast<Byte>((*this)() >> 56); }

    Block block() noexcept
    {
        Block out{};
        std::uint64_t lo = (*this)();
        std::uint64_t hi = (*this)();
        for (int i = 0; i < 8; ++i) {
            out[i] = static_cast<Byte>(lo >> (8 * i));
            out[8 + i] = static_cast<Byte>(hi >> (8 * i));
        }
        return out;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
    {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4]{};
};

} // namespace pfalab

#endif
