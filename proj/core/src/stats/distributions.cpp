#include "botsim/stats/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "botsim/errors.hpp"

namespace botsim::stats {

namespace {

constexpr double kEps = 1e-15;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 200000;

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    return h;
}

double log_beta_prefix(double a, double b, double x) {
    return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
}

void require_df(double df, const char* name) {
    if (!(df > 0.0)) throw ParameterError(std::string(name) + " must be positive");
}

}  // namespace

double regularized_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw ParameterError("incomplete beta needs a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw ParameterError("incomplete beta needs 0 <= x <= 1");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double front = std::exp(log_beta_prefix(a, b, x));
    // The fraction converges fastest below the distribution's mean.
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double inverse_regularized_beta(double a, double b, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("probability must lie in [0, 1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (regularized_beta(a, b, mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

double student_t_cdf(double t, double df) {
    require_df(df, "df");
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    const double tail = 0.5 * regularized_beta(0.5 * df, 0.5, df / (df + t * t));
    return t > 0 ? 1.0 - tail : tail;
}

double student_t_two_sided_p(double t, double df) {
    require_df(df, "df");
    if (std::isinf(t)) return 0.0;
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    return regularized_beta(0.5 * df, 0.5, df / (df + t * t));
}

double f_cdf(double x, double df1, double df2) {
    require_df(df1, "df1");
    require_df(df2, "df2");
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return regularized_beta(0.5 * df1, 0.5 * df2, df1 * x / (df1 * x + df2));
}

double f_sf(double x, double df1, double df2) {
    require_df(df1, "df1");
    require_df(df2, "df2");
    if (x <= 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return regularized_beta(0.5 * df2, 0.5 * df1, df2 / (df2 + df1 * x));
}

double f_quantile(double p, double df1, double df2) {
    require_df(df1, "df1");
    require_df(df2, "df2");
    if (!(p >= 0.0 && p < 1.0)) throw ParameterError("F quantile needs 0 <= p < 1");
    const double y = inverse_regularized_beta(0.5 * df1, 0.5 * df2, p);
    return df2 * y / (df1 * (1.0 - y));
}

double noncentral_f_cdf(double x, double df1, double df2, double lambda) {
    require_df(df1, "df1");
    require_df(df2, "df2");
    if (!(lambda >= 0.0)) throw ParameterError("noncentrality must be non-negative");
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (lambda == 0.0) return f_cdf(x, df1, df2);

    const double y = df1 * x / (df1 * x + df2);
    const double half = 0.5 * lambda;
    const double a = 0.5 * df1;
    const double b = 0.5 * df2;
    auto log_weight = [&](double j) { return -half + j * std::log(half) - std::lgamma(j + 1.0); };

    // Expand outward from the Poisson mode, always taking the heavier side,
    // until the unvisited weight is below 1e-12.
    double up = std::floor(half);
    double down = up - 1.0;
    double w_up = std::exp(log_weight(up));
    double w_down = down >= 0.0 ? std::exp(log_weight(down)) : 0.0;
    double visited = 0.0;
    double sum = 0.0;
    while (1.0 - visited >= 1e-12) {
        if (w_up == 0.0 && w_down == 0.0) break;
        if (w_up >= w_down) {
            visited += w_up;
            sum += w_up * regularized_beta(a + up, b, y);
            up += 1.0;
            w_up = std::exp(log_weight(up));
        } else {
            visited += w_down;
            sum += w_down * regularized_beta(a + down, b, y);
            down -= 1.0;
            w_down = down >= 0.0 ? std::exp(log_weight(down)) : 0.0;
        }
    }
    return std::clamp(sum, 0.0, 1.0);
}

}  // namespace botsim::stats
