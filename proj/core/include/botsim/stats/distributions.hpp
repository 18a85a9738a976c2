#pragma once

namespace botsim::stats {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation to
/// ~1e-12 relative accuracy. Requires a, b > 0 and 0 <= x <= 1.
double regularized_beta(double a, double b, double x);

/// Inverse of regularized_beta in x.
double inverse_regularized_beta(double a, double b, double p);

/// Student t with `df` degrees of freedom.
double student_t_cdf(double t, double df);
/// P(|T| >= |t|).
double student_t_two_sided_p(double t, double df);

/// Central F(df1, df2).
double f_cdf(double x, double df1, double df2);
/// Upper tail 1 - f_cdf, computed without cancellation.
double f_sf(double x, double df1, double df2);
/// Smallest x with f_cdf(x) >= p.
double f_quantile(double p, double df1, double df2);

/// Noncentral F(df1, df2, lambda): Poisson(lambda/2)-weighted mixture of
/// incomplete beta terms, summed outward from the Poisson mode until the
/// unvisited weight drops below 1e-12.
double noncentral_f_cdf(double x, double df1, double df2, double lambda);

}  // namespace botsim::stats
