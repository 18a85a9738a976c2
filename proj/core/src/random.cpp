#include "botsim/random.hpp"

#include <boost/random/binomial_distribution.hpp>

#include <cmath>
#include <numbers>

namespace botsim {

std::uint64_t Rng::binomial(std::uint64_t n, double p) {
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (n <= 32) {
        // Inversion: walk the pmf from the more likely tail with one uniform.
        const bool flip = p > 0.5;
        const double pp = flip ? 1.0 - p : p;
        const double ratio = pp / (1.0 - pp);
        double pmf = std::pow(1.0 - pp, static_cast<double>(n));
        double cdf = pmf;
        const double u = uniform01();
        std::uint64_t k = 0;
        while (u >= cdf && k < n) {
            pmf *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
            cdf += pmf;
            ++k;
        }
        return flip ? n - k : k;
    }
    // Boost's BTRD sampler is implementation-defined by Boost itself rather
    // than by the standard library, so its draws are stable across toolchains.
    boost::random::binomial_distribution<std::int64_t, double> dist(static_cast<std::int64_t>(n), p);
    return static_cast<std::uint64_t>(dist(*this));
}

double Rng::normal() {
    double u1;
    do {
        u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

BinomialSampler::BinomialSampler(double p) : p_(p) {
    if (p_ <= 0.0 || p_ >= 1.0) return;
    cdf_.resize(row_offset(kTableMax + 1));
    for (std::uint64_t n = 1; n <= kTableMax; ++n) {
        double* row = cdf_.data() + row_offset(n);
        // log-space pmf keeps the small tails accurate for every row.
        double acc = 0.0;
        for (std::uint64_t k = 0; k <= n; ++k) {
            const double log_pmf = std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
                                   std::lgamma(static_cast<double>(n - k) + 1.0) + static_cast<double>(k) * std::log(p_) +
                                   static_cast<double>(n - k) * std::log1p(-p_);
            acc += std::exp(log_pmf);
            row[k] = acc;
        }
        row[n] = 2.0;  // u < 1 always stops on the last entry
    }
}

}  // namespace botsim
