#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace cgpc {

// splitmix64 step; bijective on 64-bit state.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stream tags keep independently-consumed RNGs from colliding when they
// share the same master seed and indices.
enum class SeedStream : std::uint64_t {
    Split = 1,
    Evolve = 2,
    Adasyn = 3,
    Folds = 4,
    Data = 5,
};

// Derives a child seed from (master, stream, a, b) by absorbing each word
// through splitmix64. Every stochastic draw in the toolkit descends from a
// master seed through this function.
inline std::uint64_t derive_seed(std::uint64_t master, SeedStream stream,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ static_cast<std::uint64_t>(stream));
    s = splitmix64(s ^ a);
    s = splitmix64(s ^ b);
    return s;
}

// Seeded generator with platform-independent draws. std::mt19937_64 is
// specified bit-for-bit by the standard; the <random> distributions are not,
// so the bounded/real draws are implemented here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform integer in [0, n). Rejection sampling keeps it unbiased.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform_real() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform_real() < p; }

    // Standard normal via Box-Muller (used only for synthetic data).
    double normal() {
        double u1 = uniform_real();
        double u2 = uniform_real();
        while (u1 <= 0.0) u1 = uniform_real();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    // Fisher-Yates; std::shuffle is implementation-defined, this is not.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_index(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

} // namespace cgpc
