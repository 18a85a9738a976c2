#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace botsim::stats {

/// Ordinary least squares result.
struct LinearFit {
    std::vector<std::string> names;  ///< one per coefficient; "Intercept" first when fitted
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    std::vector<double> t_stats;
    std::vector<double> p_values;  ///< two-sided, t distribution with df_residual
    std::vector<double> residuals;
    double r_squared = 0.0;
    double adj_r_squared = 0.0;
    double f_statistic = 0.0;
    double f_p_value = 1.0;
    double rss = 0.0;
    double tss = 0.0;
    std::size_t n = 0;
    std::size_t df_model = 0;
    std::size_t df_residual = 0;
    bool has_intercept = true;
};

/// Least-squares fit via Householder QR.
///
/// `rows` holds one predictor vector per observation (all the same length);
/// an intercept column is prepended when `intercept` is set. `names` labels
/// the predictors (defaults to x1, x2, ...). Throws SingularityError naming
/// the first column that is linearly dependent on the columns before it, and
/// ParameterError when there are not more rows than coefficients.
LinearFit ols_fit(std::span<const std::vector<double>> rows, std::span<const double> response, bool intercept = true,
                  std::vector<std::string> names = {});

struct AnovaRow {
    std::string name;
    double sum_sq = 0.0;
    double df = 0.0;
    double f = 0.0;
    double p = 1.0;
};

struct AnovaTable {
    std::vector<AnovaRow> terms;
    double residual_sum_sq = 0.0;
    double residual_df = 0.0;

    double total_sum_sq() const noexcept;
    /// Throws ParameterError for an unknown term name.
    const AnovaRow& term(std::string_view name) const;
};

struct AnovaObservation {
    std::string bot_type;
    double proportion = 0.0;
    double outcome = 0.0;
};

/// outcome ~ C(bot_type) * proportion with sequential (Type I) sums of
/// squares in the order bot_type, proportion, interaction. Proportion is a
/// single-df continuous regressor; bot_type uses treatment coding against
/// its alphabetically first level.
AnovaTable anova_two_way(std::span<const AnovaObservation> data);

/// SS_term / SS_total.
double eta_squared(const AnovaTable& table, std::string_view term);

/// sqrt(eta2 / (1 - eta2)); throws ParameterError unless 0 <= eta2 < 1.
double cohens_f(double eta2);

/// Inverse of cohens_f: f^2 / (1 + f^2).
double eta_squared_from_f(double f);

}  // namespace botsim::stats
