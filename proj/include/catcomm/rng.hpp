#pragma once

#include <cstdint>
#include <random>

namespace catcomm {

// SplitMix64 step. Used as the seed splitter: a single top-level seed fans
// out to per-run and per-register seeds deterministically, so serial and
// parallel execution see identical randomness.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t state = base + index * 0x9e3779b97f4a7c15ULL;
    return splitmix64(state);
}

// Deterministic generator with explicitly-coded distributions. std::mt19937_64
// output is pinned by the standard; the std distributions are not, so bits,
// bounded integers and unit doubles are derived here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    int next_bit() { return static_cast<int>(gen_() >> 63); }

    // Unbiased integer in [0, bound) via rejection sampling. bound >= 1.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
        std::uint64_t v;
        do {
            v = gen_();
        } while (v > limit);
        return v % bound;
    }

    // Uniform double in [0,1) with 53 random bits.
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 gen_;
};

} // namespace catcomm
