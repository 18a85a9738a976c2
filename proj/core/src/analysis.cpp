#include "botsim/analysis.hpp"

#include <algorithm>

#include "botsim/errors.hpp"

namespace botsim {

namespace {

struct Proportions {
    double bad = 0.0;
    double info = 0.0;
    double good = 0.0;
};

// Realized bot counts relative to humans, so both defender bases land on
// the same scale.
Proportions proportions(const SimParams& p) {
    const CohortSizes c = cohort_sizes(p);
    const double h = static_cast<double>(c.humans);
    return {static_cast<double>(c.bad_bots) / h, static_cast<double>(c.info_correction_bots) / h,
            static_cast<double>(c.good_bots) / h};
}

}  // namespace

OutcomeMeasure parse_outcome_measure(std::string_view text) {
    if (text == "bad_majority") return OutcomeMeasure::BadMajority;
    if (text == "all_bad") return OutcomeMeasure::AllBad;
    throw ParameterError("outcome must be bad_majority or all_bad, got '" + std::string(text) + "'");
}

std::string_view to_string(OutcomeMeasure m) noexcept {
    return m == OutcomeMeasure::BadMajority ? "bad_majority" : "all_bad";
}

DncPolicy parse_dnc_policy(std::string_view text) {
    if (text == "skip") return DncPolicy::Skip;
    if (text == "max_ticks") return DncPolicy::MaxTicks;
    throw ParameterError("dnc policy must be skip or max_ticks, got '" + std::string(text) + "'");
}

std::optional<double> outcome_value(const RunRecord& r, OutcomeMeasure m, DncPolicy dnc) {
    const auto& tick = m == OutcomeMeasure::BadMajority ? r.bad_majority_tick : r.all_bad_tick;
    if (tick) return static_cast<double>(*tick);
    if (dnc == DncPolicy::MaxTicks) return static_cast<double>(r.params.max_ticks);
    return std::nullopt;
}

std::vector<stats::AnovaObservation> anova_observations(std::span<const RunRecord> records, OutcomeMeasure m,
                                                        DncPolicy dnc) {
    std::vector<stats::AnovaObservation> out;
    for (const RunRecord& r : records) {
        const auto y = outcome_value(r, m, dnc);
        if (!y) continue;
        const Proportions p = proportions(r.params);
        if (p.info > 0.0 && p.good > 0.0) continue;
        if (p.info > 0.0)
            out.push_back({"info_correction", p.info, *y});
        else if (p.good > 0.0)
            out.push_back({"good", p.good, *y});
        else
            out.push_back({"bad", p.bad, *y});
    }
    return out;
}

ProportionRegression fit_proportion_regression(std::span<const RunRecord> records, OutcomeMeasure m, DncPolicy dnc) {
    std::vector<std::string> names{"bad",         "good",         "info_correction", "bad_present",
                                   "good_present", "info_present", "bad:good_present", "bad:info_present",
                                   "bad:good",    "bad:info_correction"};
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (const RunRecord& r : records) {
        const auto v = outcome_value(r, m, dnc);
        if (!v) continue;
        const Proportions p = proportions(r.params);
        const double gp = p.good > 0.0 ? 1.0 : 0.0;
        const double ip = p.info > 0.0 ? 1.0 : 0.0;
        rows.push_back({p.bad, p.good, p.info, p.bad > 0.0 ? 1.0 : 0.0, gp, ip, p.bad * gp, p.bad * ip,
                        p.bad * p.good, p.bad * p.info});
        y.push_back(*v);
    }
    if (rows.empty()) throw ParameterError("no usable rows for the regression");

    ProportionRegression out;
    while (true) {
        try {
            out.fit = stats::ols_fit(rows, y, true, names);
            return out;
        } catch (const SingularityError& e) {
            // Column 0 is the intercept; it is never dependent on anything.
            const std::size_t j = e.column() - 1;
            out.dropped.push_back(names[j]);
            names.erase(names.begin() + static_cast<std::ptrdiff_t>(j));
            for (auto& row : rows) row.erase(row.begin() + static_cast<std::ptrdiff_t>(j));
            if (names.empty()) throw ParameterError("every predictor is constant over the data");
        }
    }
}

DefenderKind parse_defender_kind(std::string_view text) {
    if (text == "info_correction") return DefenderKind::InfoCorrection;
    if (text == "good") return DefenderKind::Good;
    throw ParameterError("defender must be info_correction or good, got '" + std::string(text) + "'");
}

std::vector<stats::SurfacePoint> surface_points(std::span<const RunRecord> records, DefenderKind defender,
                                                OutcomeMeasure m, DncPolicy dnc) {
    std::vector<stats::SurfacePoint> out;
    for (const RunRecord& r : records) {
        const auto v = outcome_value(r, m, dnc);
        if (!v) continue;
        const double own = defender == DefenderKind::Good ? r.params.alpha3 : r.params.alpha2;
        const double other = defender == DefenderKind::Good ? r.params.alpha2 : r.params.alpha3;
        if (other > 0.0) continue;
        out.push_back({r.params.alpha1, own, *v});
    }
    return out;
}

}  // namespace botsim
