#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "botsim/engine.hpp"

namespace botsim {

enum class ExperimentId : std::uint8_t { E1, E2, E3, E4, E5, ThresholdSweep, Custom };

/// "E1".."E5", "threshold", "custom".
std::string_view to_string(ExperimentId id) noexcept;

/// Accepts "1".."5", "e1".."E5", "threshold", "custom" (case-insensitive).
/// Throws ParameterError for anything else.
ExperimentId parse_experiment_id(std::string_view text);

struct SweepSpec {
    ExperimentId experiment = ExperimentId::Custom;
    std::vector<SimParams> conditions;
    std::size_t replications = 15;
    std::uint64_t base_seed = 0;
    /// Free-form remark carried into output metadata (e.g. grid caveats).
    std::string note;

    std::size_t total_runs() const noexcept { return conditions.size() * replications; }
    void validate() const;
};

/// Builds one of the named sweep designs. Every condition copies `base` and
/// overrides only the swept ratios (or threshold); the named designs sweep
/// ratios i/10 so that grid values are the nearest doubles to their decimals.
///
///   E1  alpha1 = 0.1..1.0, alpha2 = alpha3 = 0                  (10)
///   E2  alpha1 = 0.2, alpha2 = 0.1..1.5                         (15)
///   E3  alpha1 = 0.2, alpha3 = 0.1..2.0                         (20)
///   E4  alpha1 = 0.1..1.0 x alpha2 = 0.1..1.0                   (100)
///   E5  alpha1 = 0.1..2.0 x alpha3 = 0.1..1.0                   (200)
///   ThresholdSweep  threshold_t = 10..100 step 10, alpha1 = 0.2 (10)
SweepSpec build_experiment(ExperimentId id, const SimParams& base = SimParams{}, std::size_t replications = 15,
                           std::uint64_t base_seed = 0);

/// Seed of replicate `replicate` of condition `condition`. Pure and injective
/// in (condition, replicate) for a fixed base seed.
std::uint64_t derive_run_seed(std::uint64_t base_seed, std::uint64_t condition, std::uint64_t replicate) noexcept;

struct RunRecord {
    ExperimentId experiment = ExperimentId::Custom;
    std::size_t condition_index = 0;
    std::size_t replicate_index = 0;
    /// params.seed is the run seed.
    SimParams params{};
    std::optional<std::uint64_t> bad_majority_tick;
    std::optional<std::uint64_t> all_bad_tick;
    std::uint64_t ticks_run = 0;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Raised when a replicate throws; the sweep stops scheduling new work.
class SweepError : public std::runtime_error {
public:
    SweepError(std::size_t condition, std::size_t replicate, const std::string& what)
        : std::runtime_error("condition " + std::to_string(condition) + " replicate " + std::to_string(replicate) +
                             ": " + what),
          condition_(condition),
          replicate_(replicate) {}

    std::size_t condition() const noexcept { return condition_; }
    std::size_t replicate() const noexcept { return replicate_; }

private:
    std::size_t condition_;
    std::size_t replicate_;
};

using RunFunction = std::function<RunOutcome(const SimParams&)>;
using ProgressFunction = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every (condition, replicate) once on `workers` threads. The result is
/// ordered by (condition_index, replicate_index) and does not depend on the
/// worker count. `run` defaults to run_simulation.
std::vector<RunRecord> run_sweep(const SweepSpec& spec, std::size_t workers, const RunFunction& run = {},
                                 const ProgressFunction& progress = {});

/// Mean and sample standard deviation over replicates where an event occurred.
struct OutcomeSummary {
    std::size_t converged = 0;
    std::size_t replicates = 0;
    std::optional<double> mean;
    std::optional<double> sd;  ///< absent with fewer than two converged replicates
    double dnc_fraction = 0.0;
};

OutcomeSummary summarize_outcome(std::span<const std::optional<std::uint64_t>> ticks);

struct ConditionSummary {
    ExperimentId experiment = ExperimentId::Custom;
    std::size_t condition_index = 0;
    SimParams params{};
    OutcomeSummary bad_majority;
    OutcomeSummary all_bad;
};

/// One summary per condition index, ascending. Throws ParameterError on empty input.
std::vector<ConditionSummary> summarize(std::span<const RunRecord> records);

/// CSV encoding of run records. Reals use 6 significant digits, absent ticks
/// are empty fields. Reading reports malformed rows with their line number.
void write_records_csv(std::span<const RunRecord> records, std::ostream& out);
std::vector<RunRecord> read_records_csv(std::istream& in);
void write_records_csv(std::span<const RunRecord> records, const std::filesystem::path& path);
std::vector<RunRecord> read_records_csv(const std::filesystem::path& path);

void write_summary_csv(std::span<const ConditionSummary> summaries, std::ostream& out);

/// "%.6g" formatting used by every emitted file.
std::string format_real(double value);

}  // namespace botsim
