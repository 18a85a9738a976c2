#include "botsim/stats/power.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "botsim/errors.hpp"
#include "botsim/stats/distributions.hpp"

namespace botsim::stats {

void PowerSpec::validate() const {
    if (!(f >= 0.0) || !std::isfinite(f)) throw ParameterError("f must be a finite non-negative number");
    if (k < 2) throw ParameterError("k must be at least 2, got " + std::to_string(k));
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
    if (!(power > 0.0 && power < 1.0)) throw ParameterError("power must lie in (0, 1)");
}

double anova_power(double n, double f, int k, double alpha) {
    const double df1 = k - 1.0;
    const double df2 = k * (n - 1.0);
    if (!(df2 > 0.0)) return 0.0;
    const double crit = f_quantile(1.0 - alpha, df1, df2);
    const double lambda = f * f * k * n;
    const double p = 1.0 - noncentral_f_cdf(crit, df1, df2, lambda);
    return std::clamp(p, 0.0, 1.0);
}

RequiredN anova_power_required_n(const PowerSpec& spec) {
    spec.validate();
    constexpr double kLow = 1.01;
    constexpr double kHigh = 1e6;
    auto power_at = [&](double n) { return anova_power(n, spec.f, spec.k, spec.alpha); };

    RequiredN out;
    if (power_at(kLow) >= spec.power) {
        out.continuous = kLow;
    } else {
        double lo = kLow;
        double hi = 2.0;
        while (power_at(hi) < spec.power) {
            lo = hi;
            hi *= 2.0;
            if (hi > kHigh) {
                if (power_at(kHigh) < spec.power)
                    throw ParameterError("target power is not reachable with n <= 1e6 per group");
                hi = kHigh;
                break;
            }
        }
        while (hi - lo > 1e-6) {
            const double mid = 0.5 * (lo + hi);
            (power_at(mid) >= spec.power ? hi : lo) = mid;
        }
        out.continuous = hi;
    }
    out.per_group = static_cast<std::int64_t>(std::ceil(out.continuous - 1e-9));
    if (out.per_group < 2) out.per_group = 2;
    out.achieved_power = power_at(static_cast<double>(out.per_group));
    return out;
}

}  // namespace botsim::stats
