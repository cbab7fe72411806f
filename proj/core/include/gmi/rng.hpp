#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace gmi {

/// One SplitMix64 step. The engine behind seed derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from (base, stream). Used so that e.g.
/// data generation and splitting inside one trial never share an RNG stream.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t s = base;
    std::uint64_t z = splitmix64(s);
    s ^= stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL;
    return splitmix64(s) ^ z;
}

/// Seeded random source. Distributions are implemented here rather than taken
/// from <random> so the produced sequences are identical across standard
/// library implementations (mt19937_64 output itself is specified; the
/// distributions are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

    /// Standard normal via the Marsaglia polar method.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    /// Unbiased uniform integer on [0, n), n >= 1. Rejection sampling.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t x, r;
        do {
            x = bits();
            r = x % n;
        } while (x - r > std::uint64_t(0) - n);
        return r;
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

    /// Fisher-Yates permutation of {0, ..., n-1}.
    std::vector<std::uint32_t> permutation(std::uint32_t n) {
        std::vector<std::uint32_t> p(n);
        std::iota(p.begin(), p.end(), 0u);
        for (std::uint32_t i = n; i > 1; --i)
            std::swap(p[i - 1], p[static_cast<std::uint32_t>(below(i))]);
        return p;
    }

    /// Exponential(1) draw; building block for Dirichlet simplex sampling.
    double exponential() {
        double u;
        do {
            u = uniform();
        } while (u <= 0.0);
        return -std::log(u);
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace gmi
