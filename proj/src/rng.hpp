#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace prosa {

// splitmix64; used to derive independent per-phase seeds from one master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t phase) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (phase + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic RNG. mt19937_64 output is fully specified by the standard and
// all derived draws below avoid std::*_distribution, whose mapping is
// implementation-defined, so streams are reproducible across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform integer in [0, n), n >= 1. Rejection sampling, unbiased.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r;
        do {
            r = gen_();
        } while (r >= limit);
        return r % n;
    }

    // Uniform double in [0, 1) with 53 bits of randomness.
    double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [lo, hi] inclusive.
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
        return lo + below(hi - lo + 1);
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

    // Draws k distinct elements from `pool` uniformly without replacement.
    // Consumes exactly k draws via partial Fisher-Yates.
    template <class T>
    std::vector<T> sample(std::vector<T> pool, std::size_t k) {
        if (k > pool.size()) k = pool.size();
        std::vector<T> out;
        out.reserve(k);
        std::size_t n = pool.size();
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + static_cast<std::size_t>(below(n - i));
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace prosa
