// Deterministic randomness for simulations. mt19937_64 gives the same
// sequence on every platform; the bounded-draw helpers below avoid
// std::uniform_int_distribution, whose output is implementation-defined.
#pragma once

#include <cstdint>
#include <random>

namespace irvaudit {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// One stream seed from (error seed, sample seed, repetition index).
inline std::uint64_t derive_seed(std::uint64_t error_seed,
                                 std::uint64_t sample_seed,
                                 std::uint64_t rep_index) {
    std::uint64_t h = splitmix64(error_seed);
    h = splitmix64(h ^ splitmix64(sample_seed + 0x632BE59BD9B4E019ull));
    return splitmix64(h ^ splitmix64(rep_index + 0x9E3779B97F4A7C15ull));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Unbiased uniform draw in [0, n) (Lemire's multiply-shift with
    // rejection).
    std::uint64_t uniform_below(std::uint64_t n) {
        using u128 = unsigned __int128;
        u128 m = static_cast<u128>(next()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<u128>(next()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 gen_;
};

}  // namespace irvaudit
