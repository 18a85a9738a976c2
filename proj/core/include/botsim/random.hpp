#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace botsim {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a parent seed and a stream label.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(parent) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/// Random stream used throughout the simulator: xoshiro256** seeded through
/// SplitMix64. All conversions (reals, bounded integers, binomials) are done
/// here rather than by <random> distributions, whose output is
/// implementation-defined, so a seed yields the same draws on every toolchain.
__extension__ using uint128_t = unsigned __int128;

class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) noexcept {
        std::uint64_t x = seed;
        for (auto& word : state_) {
            x += 0x9e3779b97f4a7c15ULL;
            word = splitmix64(x - 0x9e3779b97f4a7c15ULL);
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~std::uint64_t{0}; }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform01() < p;
    }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept {
        // Lemire's multiply-shift with rejection of the biased low region.
        uint128_t m = static_cast<uint128_t>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<uint128_t>((*this)()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Binomial(n, p) draw. Exact in distribution for every n.
    std::uint64_t binomial(std::uint64_t n, double p);

    /// Standard normal draw (Box-Muller, one value per call).
    double normal();

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
};

/// Binomial(n, p) sampler for a fixed p. Draws for n <= kTableMax use one
/// uniform against a precomputed cdf row; larger n defer to Rng::binomial.
class BinomialSampler {
public:
    static constexpr std::uint64_t kTableMax = 64;

    explicit BinomialSampler(double p);

    double p() const noexcept { return p_; }

    std::uint64_t operator()(Rng& rng, std::uint64_t n) const {
        if (n == 0 || p_ <= 0.0) return 0;
        if (p_ >= 1.0) return n;
        if (n > kTableMax) return rng.binomial(n, p_);
        const double u = rng.uniform01();
        const double* row = cdf_.data() + row_offset(n);
        std::uint64_t k = 0;
        while (k < n && u >= row[k]) ++k;
        return k;
    }

private:
    static constexpr std::size_t row_offset(std::uint64_t n) noexcept { return static_cast<std::size_t>(n * (n + 1) / 2); }

    double p_;
    std::vector<double> cdf_;  // row n holds P(X <= k) for k = 0..n
};

}  // namespace botsim
