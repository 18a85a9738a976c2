#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "botsim/network.hpp"
#include "botsim/random.hpp"

namespace botsim {

enum class AgentRole : std::uint8_t { Human, BadBot, GoodBot, InfoCorrectionBot };
inline constexpr std::size_t kRoleCount = 4;

enum class Valence : std::uint8_t { Good, Bad };

/// Population that the defender ratios (alpha2, alpha3) multiply.
enum class DefenderBasis : std::uint8_t { BadBots, Humans };

/// How consumed-information counters trigger a Human state flip.
enum class FlipRule : std::uint8_t {
    GrossCounters,  ///< opposite-valence count since last flip reaches the threshold
    NetDifference,  ///< opposite minus same-valence count since last flip reaches the threshold
};

/// Where a relayed piece goes.
enum class RelayMode : std::uint8_t {
    SingleAlter,  ///< with probability p_p, to one uniformly chosen eligible alter
    EveryAlter,   ///< to each eligible alter independently with probability p_p
};

const char* to_string(AgentRole role) noexcept;
const char* to_string(RelayMode mode) noexcept;
const char* to_string(DefenderBasis basis) noexcept;
const char* to_string(FlipRule rule) noexcept;
const char* to_string(NetworkModel model) noexcept;

/// Full parameterization of one simulation condition. Defaults are the
/// baseline condition (1000 humans, bad bots at 20% of humans, no defenders).
struct SimParams {
    std::uint64_t n_h = 1000;
    double alpha1 = 0.2;  ///< bad bots per human
    double alpha2 = 0.0;  ///< info-correction bots per basis agent
    double alpha3 = 0.0;  ///< good bots per basis agent
    DefenderBasis defender_basis = DefenderBasis::BadBots;
    double p_g = 0.4;
    double p_c = 0.8;
    double p_p = 0.8;
    std::uint64_t threshold_t = 72;
    std::uint64_t max_ticks = 100;
    /// Network shape; `n` is ignored and replaced by the total agent count.
    SmallWorldSpec network{};
    RelayMode relay_mode = RelayMode::SingleAlter;
    /// Relays skip the alter the piece was received from.
    bool echo_suppression = true;
    FlipRule flip_rule = FlipRule::GrossCounters;
    std::uint64_t seed = 0;

    /// Throws ParameterError naming the first offending field.
    void validate() const;

    friend bool operator==(const SimParams&, const SimParams&) = default;
};

struct CohortSizes {
    std::uint64_t humans = 0;
    std::uint64_t bad_bots = 0;
    std::uint64_t info_correction_bots = 0;
    std::uint64_t good_bots = 0;

    std::uint64_t total() const noexcept { return humans + bad_bots + info_correction_bots + good_bots; }
};

/// Bot counts are ratio * basis rounded half away from zero.
CohortSizes cohort_sizes(const SimParams& params);

/// The topology Simulation(params) runs on (the total agent count replaces network.n).
Network build_network(const SimParams& params);
/// Role of every node id, shuffled from the seed.
std::vector<AgentRole> assign_roles(const SimParams& params);

struct Agent {
    AgentRole role = AgentRole::Human;
    /// Meaningful for Humans only; bots hold their role's fixed stance.
    bool bad = false;
    std::uint64_t good_consumed = 0;
    std::uint64_t bad_consumed = 0;
};

/// Pieces of information held on one link, split by valence.
struct InfoCounts {
    std::uint64_t good = 0;
    std::uint64_t bad = 0;

    std::uint64_t of(Valence v) const noexcept { return v == Valence::Good ? good : bad; }
    friend bool operator==(const InfoCounts&, const InfoCounts&) = default;
};

/// Per-link piece counts saturate here so that long runs cannot overflow.
inline constexpr std::uint64_t kPieceCountCap = std::uint64_t{1} << 53;

/// Pieces an agent selects for relay out of what it received, after any
/// fact-check (Info-Correction Bot) or corruption (Bad Bot) rewrite.
InfoCounts relay_candidates(const Agent& ego, InfoCounts received) noexcept;

struct TickStats {
    std::uint64_t tick = 0;
    std::uint64_t good_humans = 0;
    std::uint64_t bad_humans = 0;
    std::array<std::uint64_t, 2> generated{};  ///< indexed by Valence
    std::array<std::uint64_t, 2> consumed{};
    std::array<std::uint64_t, 2> relayed{};    ///< link deliveries
    std::array<std::array<std::uint64_t, 2>, kRoleCount> relayed_by_role{};

    friend bool operator==(const TickStats&, const TickStats&) = default;
};

struct RunOutcome {
    std::optional<std::uint64_t> bad_majority_tick;
    std::optional<std::uint64_t> all_bad_tick;
    std::uint64_t ticks_run = 0;
    std::uint64_t final_good_humans = 0;
    std::uint64_t final_bad_humans = 0;

    friend bool operator==(const RunOutcome&, const RunOutcome&) = default;
};

/// One replication of the diffusion model.
///
/// Each tick runs generation, consumption, propagation and state update in
/// that order, then swaps the double-buffered inboxes. Random draws happen in
/// ascending agent id order within every stage, so a run is a pure function
/// of its parameters (including the seed).
///
/// Inboxes hold piece counts per incoming link rather than individual pieces:
/// slot s of agent i holds what neighbors(i)[s] sent to i. Under
/// RelayMode::EveryAlter relay volume grows geometrically with the tick
/// count, which rules out per-piece storage.
class Simulation {
public:
    /// Generates the network and shuffles roles onto node ids.
    explicit Simulation(const SimParams& params);

    /// Runs over a caller-supplied topology and role assignment (one role per node).
    Simulation(const SimParams& params, Network network, std::vector<AgentRole> roles);

    /// Advances one tick. Throws StateError once terminated().
    TickStats step();

    /// Steps until every Human is Bad or max_ticks is reached.
    RunOutcome run_to_completion(const std::function<void(const TickStats&)>& on_tick = {});

    bool terminated() const noexcept;

    const SimParams& params() const noexcept { return params_; }
    const Network& network() const noexcept { return network_; }
    std::span<const Agent> agents() const noexcept { return agents_; }
    std::uint64_t tick() const noexcept { return tick_; }
    const RunOutcome& outcome() const noexcept { return outcome_; }
    std::uint64_t human_count() const noexcept { return human_count_; }

    /// Received last tick, per incoming link of `agent` (aligned with network().neighbors(agent)).
    std::span<const InfoCounts> inbox_prev(NodeId agent) const;
    /// Received so far this tick.
    std::span<const InfoCounts> inbox_curr(NodeId agent) const;

private:
    void init_links();
    void generate(TickStats& stats);
    void consume(TickStats& stats);
    void propagate(TickStats& stats);
    void deliver(NodeId ego, std::size_t out_slot, Valence v, std::uint64_t count, TickStats& stats);
    void relay_single(NodeId ego, std::span<const InfoCounts> kept, TickStats& stats);
    void relay_every(NodeId ego, std::span<const InfoCounts> kept, TickStats& stats);
    void update_states();
    void bookkeep(TickStats& stats);

    SimParams params_;
    Network network_;
    std::vector<Agent> agents_;
    std::vector<std::size_t> slot_offset_;   // node -> first incoming-link slot
    std::vector<std::size_t> reverse_slot_;  // slot (i <- j) -> slot (j <- i)
    std::vector<InfoCounts> inbox_prev_;
    std::vector<InfoCounts> inbox_curr_;
    Rng rng_;
    BinomialSampler consume_draw_;
    BinomialSampler relay_draw_;
    std::uint64_t tick_ = 0;
    std::uint64_t human_count_ = 0;
    RunOutcome outcome_{};
};

/// Convenience: initialize and run one replication.
RunOutcome run_simulation(const SimParams& params);

/// Per-tick CSV with header
/// tick,good_humans,bad_humans,good_generated,bad_generated,good_consumed,bad_consumed,good_relayed,bad_relayed
void write_time_series_csv(std::span<const TickStats> series, std::ostream& out);

}  // namespace botsim
