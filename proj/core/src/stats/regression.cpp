#include "botsim/stats/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "botsim/errors.hpp"
#include "botsim/stats/distributions.hpp"
#include "householder_qr.hpp"

namespace botsim::stats {

namespace {

struct Design {
    std::vector<double> columns;  // column-major
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::string> names;
};

Design build_design(std::span<const std::vector<double>> rows, bool intercept, std::vector<std::string> names) {
    Design d;
    d.rows = rows.size();
    const std::size_t k = rows.empty() ? 0 : rows.front().size();
    for (const auto& r : rows)
        if (r.size() != k) throw ParameterError("design rows have inconsistent lengths");
    if (names.empty())
        for (std::size_t j = 0; j < k; ++j) names.push_back("x" + std::to_string(j + 1));
    if (names.size() != k) throw ParameterError("predictor names do not match the row length");
    d.cols = k + (intercept ? 1 : 0);
    if (intercept) d.names.push_back("Intercept");
    d.names.insert(d.names.end(), names.begin(), names.end());
    d.columns.assign(d.rows * d.cols, 0.0);
    for (std::size_t i = 0; i < d.rows; ++i) {
        std::size_t j = 0;
        if (intercept) d.columns[j++ * d.rows + i] = 1.0;
        for (double v : rows[i]) {
            if (!std::isfinite(v)) throw ParameterError("design contains a non-finite value");
            d.columns[j++ * d.rows + i] = v;
        }
    }
    return d;
}

}  // namespace

LinearFit ols_fit(std::span<const std::vector<double>> rows, std::span<const double> response, bool intercept,
                  std::vector<std::string> names) {
    if (rows.size() != response.size()) throw ParameterError("row count does not match response length");
    Design d = build_design(rows, intercept, std::move(names));
    if (d.cols == 0) throw ParameterError("design has no columns");
    if (d.rows <= d.cols)
        throw ParameterError("need more observations (" + std::to_string(d.rows) + ") than coefficients (" +
                             std::to_string(d.cols) + ")");
    for (double y : response)
        if (!std::isfinite(y)) throw ParameterError("response contains a non-finite value");

    const detail::HouseholderQr qr(std::move(d.columns), d.rows, d.cols, d.names);
    const std::vector<double> qty = qr.apply_qt(response);

    LinearFit fit;
    fit.names = d.names;
    fit.n = d.rows;
    fit.has_intercept = intercept;
    fit.coefficients = qr.solve_r(qty);
    fit.df_residual = d.rows - d.cols;
    fit.df_model = intercept ? d.cols - 1 : d.cols;

    fit.residuals.resize(d.rows);
    for (std::size_t i = 0; i < d.rows; ++i) {
        double yhat = 0.0;
        std::size_t j = 0;
        if (intercept) yhat += fit.coefficients[j++];
        for (double v : rows[i]) yhat += fit.coefficients[j++] * v;
        fit.residuals[i] = response[i] - yhat;
    }
    // Q^T y below the first p entries carries the residual sum of squares
    // without the cancellation of squaring residuals of a near-perfect fit.
    fit.rss = 0.0;
    for (std::size_t i = d.cols; i < d.rows; ++i) fit.rss += qty[i] * qty[i];

    const double mean = std::accumulate(response.begin(), response.end(), 0.0) / static_cast<double>(d.rows);
    fit.tss = 0.0;
    for (double y : response) fit.tss += intercept ? (y - mean) * (y - mean) : y * y;

    const double dfr = static_cast<double>(fit.df_residual);
    const double sigma2 = fit.rss / dfr;
    const auto diag = qr.inverse_gram_diagonal();
    fit.std_errors.resize(d.cols);
    fit.t_stats.resize(d.cols);
    fit.p_values.resize(d.cols);
    for (std::size_t j = 0; j < d.cols; ++j) {
        fit.std_errors[j] = std::sqrt(sigma2 * diag[j]);
        if (fit.std_errors[j] > 0.0) {
            fit.t_stats[j] = fit.coefficients[j] / fit.std_errors[j];
            fit.p_values[j] = student_t_two_sided_p(fit.t_stats[j], dfr);
        } else {
            fit.t_stats[j] = fit.coefficients[j] == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), fit.coefficients[j]);
            fit.p_values[j] = fit.coefficients[j] == 0.0 ? 1.0 : 0.0;
        }
    }

    if (fit.tss > 0.0) {
        fit.r_squared = std::clamp(1.0 - fit.rss / fit.tss, 0.0, 1.0);
        fit.adj_r_squared = 1.0 - (1.0 - fit.r_squared) * (static_cast<double>(d.rows) - (intercept ? 1.0 : 0.0)) / dfr;
    } else {
        fit.r_squared = 0.0;
        fit.adj_r_squared = 0.0;
    }
    if (fit.df_model > 0) {
        const double explained = std::max(fit.tss - fit.rss, 0.0);
        if (fit.rss > 0.0) {
            fit.f_statistic = (explained / static_cast<double>(fit.df_model)) / sigma2;
            fit.f_p_value = f_sf(fit.f_statistic, static_cast<double>(fit.df_model), dfr);
        } else {
            fit.f_statistic = explained > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
            fit.f_p_value = explained > 0.0 ? 0.0 : 1.0;
        }
    }
    return fit;
}

double AnovaTable::total_sum_sq() const noexcept {
    double total = residual_sum_sq;
    for (const AnovaRow& r : terms) total += r.sum_sq;
    return total;
}

const AnovaRow& AnovaTable::term(std::string_view name) const {
    for (const AnovaRow& r : terms)
        if (r.name == name) return r;
    throw ParameterError("no ANOVA term named '" + std::string(name) + "'");
}

AnovaTable anova_two_way(std::span<const AnovaObservation> data) {
    std::map<std::string, std::size_t> counts;
    for (const auto& obs : data) ++counts[obs.bot_type];
    if (counts.size() < 2) throw ParameterError("factor bot_type needs at least 2 levels, found " + std::to_string(counts.size()));
    for (const auto& [level, n] : counts)
        if (n < 2) throw ParameterError("factor bot_type level '" + level + "' has fewer than 2 observations");

    std::vector<std::string> levels;
    for (const auto& [level, n] : counts) levels.push_back(level);
    const std::size_t L = levels.size();
    const std::size_t n = data.size();
    const std::size_t p = 2 * L;  // intercept, L-1 dummies, proportion, L-1 interactions

    std::vector<std::string> names{"Intercept"};
    for (std::size_t l = 1; l < L; ++l) names.push_back("C(bot_type)[" + levels[l] + "]");
    names.push_back("proportion");
    for (std::size_t l = 1; l < L; ++l) names.push_back("C(bot_type)[" + levels[l] + "]:proportion");
    if (n <= p) throw ParameterError("too few observations for the two-way model");

    std::vector<double> a(n * p, 0.0);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& obs = data[i];
        const std::size_t level = static_cast<std::size_t>(
            std::lower_bound(levels.begin(), levels.end(), obs.bot_type) - levels.begin());
        a[0 * n + i] = 1.0;
        if (level > 0) a[level * n + i] = 1.0;
        a[L * n + i] = obs.proportion;
        if (level > 0) a[(L + level) * n + i] = obs.proportion;
        y[i] = obs.outcome;
    }

    const detail::HouseholderQr qr(std::move(a), n, p, names);
    const std::vector<double> effects = qr.apply_qt(y);
    auto block = [&](std::size_t first, std::size_t count) {
        double ss = 0.0;
        for (std::size_t j = first; j < first + count; ++j) ss += effects[j] * effects[j];
        return ss;
    };

    AnovaTable table;
    table.residual_sum_sq = block(p, n - p);
    table.residual_df = static_cast<double>(n - p);
    table.terms.push_back({"C(bot_type)", block(1, L - 1), static_cast<double>(L - 1)});
    table.terms.push_back({"proportion", block(L, 1), 1.0});
    table.terms.push_back({"C(bot_type):proportion", block(L + 1, L - 1), static_cast<double>(L - 1)});
    const double ms_res = table.residual_sum_sq / table.residual_df;
    for (AnovaRow& row : table.terms) {
        const double ms = row.sum_sq / row.df;
        if (ms_res > 0.0) {
            row.f = ms / ms_res;
            row.p = f_sf(row.f, row.df, table.residual_df);
        } else {
            row.f = ms > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
            row.p = ms > 0.0 ? 0.0 : 1.0;
        }
    }
    return table;
}

double eta_squared(const AnovaTable& table, std::string_view term) {
    const double total = table.total_sum_sq();
    if (!(total > 0.0)) throw ParameterError("total sum of squares is zero");
    return table.term(term).sum_sq / total;
}

double cohens_f(double eta2) {
    if (!(eta2 >= 0.0) || !(eta2 < 1.0)) throw ParameterError("eta squared must lie in [0, 1)");
    return std::sqrt(eta2 / (1.0 - eta2));
}

double eta_squared_from_f(double f) {
    if (!(f >= 0.0)) throw ParameterError("Cohen's f must be non-negative");
    return f * f / (1.0 + f * f);
}

}  // namespace botsim::stats
