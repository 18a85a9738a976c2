#pragma once

#include <cstdint>

namespace botsim::stats {

struct PowerSpec {
    double f = 0.25;  ///< Cohen's f
    int k = 2;        ///< number of groups
    double alpha = 0.05;
    double power = 0.8;

    /// Throws ParameterError naming the first offending field.
    void validate() const;
};

/// Power of a one-way fixed-effects ANOVA with k groups of n observations each
/// (n may be fractional): noncentrality f^2 * k * n, df (k-1, k(n-1)).
double anova_power(double n, double f, int k, double alpha);

struct RequiredN {
    double continuous = 0.0;  ///< solution of power(n) = target
    std::int64_t per_group = 0;  ///< ceil(continuous)
    double achieved_power = 0.0;  ///< power at per_group
};

/// Smallest per-group n with power >= target. Bisection on n in [1.01, 1e6];
/// throws ParameterError when the target is not reached inside that range.
RequiredN anova_power_required_n(const PowerSpec& spec);

}  // namespace botsim::stats
