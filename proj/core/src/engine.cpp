#include "botsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>

#include "botsim/errors.hpp"

namespace botsim {

namespace {

constexpr std::uint64_t kNetworkStream = 1;
constexpr std::uint64_t kRoleStream = 2;
constexpr std::uint64_t kDynamicsStream = 3;

constexpr std::size_t idx(Valence v) noexcept { return static_cast<std::size_t>(v); }

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) noexcept {
    const std::uint64_t s = a + b;
    return (s < a || s > kPieceCountCap) ? kPieceCountCap : s;
}

// Tick totals saturate at the top of the 64-bit range.
std::uint64_t sat_total(std::uint64_t a, std::uint64_t b) noexcept {
    const std::uint64_t s = a + b;
    return s < a ? UINT64_MAX : s;
}

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError(std::string(name) + " must lie in [0, 1]");
}

void check_ratio(double a, const char* name) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw ParameterError(std::string(name) + " must be a finite non-negative ratio");
}

std::uint64_t round_count(double ratio, std::uint64_t basis) {
    return static_cast<std::uint64_t>(std::llround(ratio * static_cast<double>(basis)));
}

CohortSizes checked_sizes(const SimParams& params) {
    params.validate();
    const CohortSizes sizes = cohort_sizes(params);
    if (sizes.total() < 2) throw ParameterError("simulation needs at least 2 agents");
    return sizes;
}

Network make_network(const SimParams& params) {
    const std::uint64_t total = checked_sizes(params).total();
    Rng rng(derive_seed(params.seed, kNetworkStream));
    SmallWorldSpec spec = params.network;
    spec.n = total;
    if (spec.model == NetworkModel::WattsStrogatz) {
        if (total == 2) {
            const std::pair<NodeId, NodeId> edge{0, 1};
            return Network::from_edges(2, std::span(&edge, 1));
        }
        // Small populations cannot host the configured lattice degree.
        const std::uint64_t max_even = (total - 1) & ~std::uint64_t{1};
        spec.k = std::min<std::uint64_t>(spec.k, max_even);
    }
    return generate_network(spec, rng);
}

std::vector<AgentRole> make_roles(const SimParams& params) {
    const CohortSizes sizes = checked_sizes(params);
    std::vector<AgentRole> roles;
    roles.reserve(sizes.total());
    roles.insert(roles.end(), sizes.humans, AgentRole::Human);
    roles.insert(roles.end(), sizes.bad_bots, AgentRole::BadBot);
    roles.insert(roles.end(), sizes.info_correction_bots, AgentRole::InfoCorrectionBot);
    roles.insert(roles.end(), sizes.good_bots, AgentRole::GoodBot);
    Rng rng(derive_seed(params.seed, kRoleStream));
    for (std::size_t i = roles.size(); i > 1; --i) std::swap(roles[i - 1], roles[rng.below(i)]);
    return roles;
}

}  // namespace

Network build_network(const SimParams& params) { return make_network(params); }

std::vector<AgentRole> assign_roles(const SimParams& params) { return make_roles(params); }

const char* to_string(AgentRole role) noexcept {
    switch (role) {
        case AgentRole::Human: return "human";
        case AgentRole::BadBot: return "bad_bot";
        case AgentRole::GoodBot: return "good_bot";
        case AgentRole::InfoCorrectionBot: return "info_correction_bot";
    }
    return "?";
}

const char* to_string(RelayMode mode) noexcept {
    return mode == RelayMode::SingleAlter ? "single_alter" : "every_alter";
}

const char* to_string(DefenderBasis basis) noexcept {
    return basis == DefenderBasis::BadBots ? "bad_bots" : "humans";
}

const char* to_string(FlipRule rule) noexcept {
    return rule == FlipRule::GrossCounters ? "gross" : "net";
}

const char* to_string(NetworkModel model) noexcept {
    return model == NetworkModel::WattsStrogatz ? "watts_strogatz" : "erdos_renyi";
}

void SimParams::validate() const {
    if (n_h < 1) throw ParameterError("n_h must be at least 1");
    check_ratio(alpha1, "alpha1");
    check_ratio(alpha2, "alpha2");
    check_ratio(alpha3, "alpha3");
    check_probability(p_g, "p_g");
    check_probability(p_c, "p_c");
    check_probability(p_p, "p_p");
    if (threshold_t < 1) throw ParameterError("threshold_t must be at least 1");
    if (max_ticks < 1) throw ParameterError("max_ticks must be at least 1");
    if (!(network.beta >= 0.0 && network.beta <= 1.0)) throw ParameterError("beta must lie in [0, 1]");
    if (network.model == NetworkModel::WattsStrogatz && (network.k < 2 || network.k % 2 != 0))
        throw ParameterError("k must be an even number >= 2");
}

CohortSizes cohort_sizes(const SimParams& params) {
    CohortSizes sizes;
    sizes.humans = params.n_h;
    sizes.bad_bots = round_count(params.alpha1, params.n_h);
    const std::uint64_t basis = params.defender_basis == DefenderBasis::BadBots ? sizes.bad_bots : params.n_h;
    sizes.info_correction_bots = round_count(params.alpha2, basis);
    sizes.good_bots = round_count(params.alpha3, basis);
    return sizes;
}

InfoCounts relay_candidates(const Agent& ego, InfoCounts in) noexcept {
    switch (ego.role) {
        case AgentRole::Human:
            return ego.bad ? InfoCounts{0, in.bad} : in;
        case AgentRole::GoodBot:
            return {in.good, 0};
        case AgentRole::InfoCorrectionBot:
            return {sat_add(in.good, in.bad), 0};
        case AgentRole::BadBot:
            return {0, sat_add(in.good, in.bad)};
    }
    return {};
}

Simulation::Simulation(const SimParams& params)
    : Simulation(params, make_network(params), make_roles(params)) {}

Simulation::Simulation(const SimParams& params, Network network, std::vector<AgentRole> roles)
    : params_(params),
      network_(std::move(network)),
      rng_(derive_seed(params.seed, kDynamicsStream)),
      consume_draw_(params.p_c),
      relay_draw_(params.p_p) {
    params_.validate();
    if (roles.size() != network_.node_count())
        throw ParameterError("role count does not match network node count");
    if (roles.size() < 2) throw ParameterError("simulation needs at least 2 agents");
    agents_.reserve(roles.size());
    for (AgentRole r : roles) {
        agents_.push_back(Agent{r, false, 0, 0});
        if (r == AgentRole::Human) ++human_count_;
    }
    if (human_count_ == 0) throw ParameterError("simulation needs at least one Human");
    init_links();
}

void Simulation::init_links() {
    const std::size_t n = network_.node_count();
    slot_offset_.assign(n + 1, 0);
    for (NodeId i = 0; i < n; ++i) slot_offset_[i + 1] = slot_offset_[i] + network_.degree(i);
    reverse_slot_.assign(slot_offset_[n], 0);
    for (NodeId i = 0; i < n; ++i) {
        auto nbrs = network_.neighbors(i);
        for (std::size_t s = 0; s < nbrs.size(); ++s) {
            auto back = network_.neighbors(nbrs[s]);
            const auto pos = std::lower_bound(back.begin(), back.end(), i) - back.begin();
            reverse_slot_[slot_offset_[i] + s] = slot_offset_[nbrs[s]] + static_cast<std::size_t>(pos);
        }
    }
    inbox_prev_.assign(slot_offset_[n], InfoCounts{});
    inbox_curr_.assign(slot_offset_[n], InfoCounts{});
}

bool Simulation::terminated() const noexcept {
    return outcome_.all_bad_tick.has_value() || tick_ >= params_.max_ticks;
}

std::span<const InfoCounts> Simulation::inbox_prev(NodeId agent) const {
    return std::span(inbox_prev_).subspan(slot_offset_.at(agent), network_.degree(agent));
}

std::span<const InfoCounts> Simulation::inbox_curr(NodeId agent) const {
    return std::span(inbox_curr_).subspan(slot_offset_.at(agent), network_.degree(agent));
}

TickStats Simulation::step() {
    if (terminated()) throw StateError("simulation already terminated at tick " + std::to_string(tick_));
    TickStats stats;
    generate(stats);
    consume(stats);
    propagate(stats);
    update_states();
    bookkeep(stats);
    return stats;
}

void Simulation::generate(TickStats& stats) {
    for (NodeId i = 0; i < agents_.size(); ++i) {
        const Agent& a = agents_[i];
        if (!rng_.bernoulli(params_.p_g)) continue;
        std::uint64_t pieces = 2;
        Valence v = Valence::Good;
        switch (a.role) {
            case AgentRole::InfoCorrectionBot: continue;
            case AgentRole::Human:
                pieces = 1;
                v = a.bad ? Valence::Bad : Valence::Good;
                break;
            case AgentRole::BadBot: v = Valence::Bad; break;
            case AgentRole::GoodBot: v = Valence::Good; break;
        }
        stats.generated[idx(v)] = sat_total(stats.generated[idx(v)], pieces);
        // A post is visible to every alter; p_p only gates relays.
        for (std::size_t s = slot_offset_[i]; s < slot_offset_[i + 1]; ++s) {
            InfoCounts& dst = inbox_curr_[reverse_slot_[s]];
            if (v == Valence::Good)
                dst.good = sat_add(dst.good, pieces);
            else
                dst.bad = sat_add(dst.bad, pieces);
        }
    }
}

void Simulation::consume(TickStats& stats) {
    for (NodeId i = 0; i < agents_.size(); ++i) {
        Agent& a = agents_[i];
        if (a.role != AgentRole::Human) continue;
        InfoCounts in;
        for (std::size_t s = slot_offset_[i]; s < slot_offset_[i + 1]; ++s) {
            in.good = sat_add(in.good, inbox_prev_[s].good);
            in.bad = sat_add(in.bad, inbox_prev_[s].bad);
        }
        const std::uint64_t good = consume_draw_(rng_, in.good);
        const std::uint64_t bad = consume_draw_(rng_, in.bad);
        a.good_consumed = sat_add(a.good_consumed, good);
        a.bad_consumed = sat_add(a.bad_consumed, bad);
        stats.consumed[idx(Valence::Good)] = sat_total(stats.consumed[idx(Valence::Good)], good);
        stats.consumed[idx(Valence::Bad)] = sat_total(stats.consumed[idx(Valence::Bad)], bad);
    }
}

void Simulation::propagate(TickStats& stats) {
    std::vector<InfoCounts> kept;
    for (NodeId i = 0; i < agents_.size(); ++i) {
        const std::size_t begin = slot_offset_[i];
        const std::size_t end = slot_offset_[i + 1];
        kept.assign(end - begin, InfoCounts{});
        bool any = false;
        for (std::size_t s = begin; s < end; ++s) {
            kept[s - begin] = relay_candidates(agents_[i], inbox_prev_[s]);
            any = any || kept[s - begin].good != 0 || kept[s - begin].bad != 0;
        }
        if (!any) continue;
        if (params_.relay_mode == RelayMode::SingleAlter)
            relay_single(i, kept, stats);
        else
            relay_every(i, kept, stats);
    }
}

void Simulation::deliver(NodeId ego, std::size_t out_slot, Valence v, std::uint64_t count, TickStats& stats) {
    if (count == 0) return;
    InfoCounts& dst = inbox_curr_[reverse_slot_[out_slot]];
    std::uint64_t& field = v == Valence::Good ? dst.good : dst.bad;
    field = sat_add(field, count);
    stats.relayed[idx(v)] = sat_total(stats.relayed[idx(v)], count);
    auto& by_role = stats.relayed_by_role[static_cast<std::size_t>(agents_[ego].role)];
    by_role[idx(v)] = sat_total(by_role[idx(v)], count);
}

void Simulation::relay_single(NodeId ego, std::span<const InfoCounts> kept, TickStats& stats) {
    const std::size_t begin = slot_offset_[ego];
    const std::size_t degree = kept.size();
    const std::size_t choices = params_.echo_suppression ? degree - 1 : degree;
    if (choices == 0) return;
    for (std::size_t s = 0; s < degree; ++s) {
        for (Valence v : {Valence::Good, Valence::Bad}) {
            const std::uint64_t sent = relay_draw_(rng_, kept[s].of(v));
            for (std::uint64_t piece = 0; piece < sent; ++piece) {
                std::size_t r = rng_.below(choices);
                if (params_.echo_suppression && r >= s) ++r;
                deliver(ego, begin + r, v, 1, stats);
            }
        }
    }
}

void Simulation::relay_every(NodeId ego, std::span<const InfoCounts> kept, TickStats& stats) {
    const std::size_t begin = slot_offset_[ego];
    InfoCounts total;
    for (const InfoCounts& k : kept) {
        total.good = sat_add(total.good, k.good);
        total.bad = sat_add(total.bad, k.bad);
    }
    // Each piece reaches each eligible alter independently with p_p, so the
    // delivery to one alter is Binomial(eligible pieces, p_p).
    for (std::size_t r = 0; r < kept.size(); ++r) {
        InfoCounts eligible = total;
        if (params_.echo_suppression) {
            eligible.good -= std::min(eligible.good, kept[r].good);
            eligible.bad -= std::min(eligible.bad, kept[r].bad);
        }
        const std::uint64_t good = relay_draw_(rng_, eligible.good);
        const std::uint64_t bad = relay_draw_(rng_, eligible.bad);
        deliver(ego, begin + r, Valence::Good, good, stats);
        deliver(ego, begin + r, Valence::Bad, bad, stats);
    }
}

void Simulation::update_states() {
    const std::uint64_t t = params_.threshold_t;
    for (Agent& a : agents_) {
        if (a.role != AgentRole::Human) continue;
        const std::uint64_t opposite = a.bad ? a.good_consumed : a.bad_consumed;
        const std::uint64_t same = a.bad ? a.bad_consumed : a.good_consumed;
        bool flip = false;
        if (params_.flip_rule == FlipRule::GrossCounters)
            flip = opposite >= t;
        else
            flip = opposite > same && opposite - same >= t;
        if (flip) {
            a.bad = !a.bad;
            a.good_consumed = 0;
            a.bad_consumed = 0;
        }
    }
}

void Simulation::bookkeep(TickStats& stats) {
    std::swap(inbox_prev_, inbox_curr_);
    std::fill(inbox_curr_.begin(), inbox_curr_.end(), InfoCounts{});
    ++tick_;

    for (const Agent& a : agents_) {
        if (a.role != AgentRole::Human) continue;
        if (a.bad)
            ++stats.bad_humans;
        else
            ++stats.good_humans;
    }
    stats.tick = tick_;
    if (!outcome_.bad_majority_tick && stats.bad_humans > stats.good_humans) outcome_.bad_majority_tick = tick_;
    if (!outcome_.all_bad_tick && stats.bad_humans == human_count_) outcome_.all_bad_tick = tick_;
    outcome_.ticks_run = tick_;
    outcome_.final_good_humans = stats.good_humans;
    outcome_.final_bad_humans = stats.bad_humans;
}

RunOutcome Simulation::run_to_completion(const std::function<void(const TickStats&)>& on_tick) {
    if (tick_ == 0) {
        outcome_.final_good_humans = human_count_;
        outcome_.final_bad_humans = 0;
    }
    while (!terminated()) {
        const TickStats stats = step();
        if (on_tick) on_tick(stats);
    }
    return outcome_;
}

RunOutcome run_simulation(const SimParams& params) {
    Simulation sim(params);
    return sim.run_to_completion();
}

void write_time_series_csv(std::span<const TickStats> series, std::ostream& out) {
    out << "tick,good_humans,bad_humans,good_generated,bad_generated,good_consumed,bad_consumed,good_relayed,bad_relayed\n";
    for (const TickStats& s : series) {
        out << s.tick << ',' << s.good_humans << ',' << s.bad_humans << ',' << s.generated[0] << ','
            << s.generated[1] << ',' << s.consumed[0] << ',' << s.consumed[1] << ',' << s.relayed[0] << ','
            << s.relayed[1] << '\n';
    }
}

}  // namespace botsim
