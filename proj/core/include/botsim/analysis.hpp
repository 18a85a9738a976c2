#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "botsim/experiments.hpp"
#include "botsim/stats/regression.hpp"
#include "botsim/stats/surface.hpp"

namespace botsim {

enum class OutcomeMeasure { BadMajority, AllBad };
/// "bad_majority" | "all_bad"
OutcomeMeasure parse_outcome_measure(std::string_view text);
std::string_view to_string(OutcomeMeasure m) noexcept;

/// What to do with replicates where the event never happened.
enum class DncPolicy {
    Skip,      ///< drop the replicate
    MaxTicks,  ///< treat as censored at max_ticks
};
DncPolicy parse_dnc_policy(std::string_view text);

std::optional<double> outcome_value(const RunRecord& r, OutcomeMeasure m, DncPolicy dnc);

/// Maps single-variation runs onto (bot_type, proportion, outcome):
///   only bad bots        -> "bad", alpha1
///   info-correction only -> "info_correction", defender proportion of humans
///   good bots only       -> "good", defender proportion of humans
/// Runs with both defender types are skipped.
std::vector<stats::AnovaObservation> anova_observations(std::span<const RunRecord> records, OutcomeMeasure m,
                                                        DncPolicy dnc);

/// Bot-proportion regression with presence dummies and bad-bot interactions.
/// Columns that are linearly dependent on earlier ones (e.g. a presence
/// dummy that is constant over the data) are dropped and listed.
struct ProportionRegression {
    stats::LinearFit fit;
    std::vector<std::string> dropped;
};
ProportionRegression fit_proportion_regression(std::span<const RunRecord> records, OutcomeMeasure m, DncPolicy dnc);

enum class DefenderKind { InfoCorrection, Good };
DefenderKind parse_defender_kind(std::string_view text);

/// One point per replicate on the swept axes: b = alpha1, d = alpha2 or
/// alpha3 as configured, T = outcome. Rows with the other defender type present are skipped.
std::vector<stats::SurfacePoint> surface_points(std::span<const RunRecord> records, DefenderKind defender,
                                                OutcomeMeasure m, DncPolicy dnc);

}  // namespace botsim
