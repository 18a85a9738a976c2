#include "config.hpp"

#include <fstream>
#include <set>
#include <string_view>

#include "botsim/errors.hpp"

namespace botsim::cli {

namespace {

using nlohmann::json;

const std::set<std::string, std::less<>> kKnownKeys = {
    "n_h",       "alpha1",      "alpha2",      "alpha3",     "defender_basis",   "p_g",        "p_c",
    "p_p",       "threshold_t", "max_ticks",   "network_model", "k",             "beta",       "relay_mode",
    "echo_suppression", "flip_rule", "seed",   "experiment", "replications",     "base_seed",  "jobs",
    "out",
};

[[noreturn]] void bad_field(std::string_view key, std::string_view what) {
    throw ParameterError("config field '" + std::string(key) + "': " + std::string(what));
}

double real_field(const json& v, std::string_view key) {
    if (!v.is_number()) bad_field(key, "expected a number");
    return v.get<double>();
}

std::uint64_t uint_field(const json& v, std::string_view key) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        bad_field(key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

bool bool_field(const json& v, std::string_view key) {
    if (!v.is_boolean()) bad_field(key, "expected true or false");
    return v.get<bool>();
}

std::string string_field(const json& v, std::string_view key) {
    if (!v.is_string()) bad_field(key, "expected a string");
    return v.get<std::string>();
}

template <class Enum>
Enum enum_field(const json& v, std::string_view key, std::initializer_list<Enum> options) {
    const std::string s = string_field(v, key);
    std::string allowed;
    for (Enum e : options) {
        if (s == to_string(e)) return e;
        allowed += (allowed.empty() ? "" : ", ") + std::string(to_string(e));
    }
    bad_field(key, "unknown value '" + s + "' (expected one of " + allowed + ")");
}

// format_real round trip keeps emitted files at 6 significant digits.
double rounded(double x) { return std::stod(format_real(x)); }

}  // namespace

CliConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ParameterError("config must be a JSON object");
    for (const auto& [key, value] : doc.items())
        if (!kKnownKeys.contains(key)) bad_field(key, "unknown key");

    CliConfig c;
    SimParams& p = c.params;
    for (const auto& [key, v] : doc.items()) {
        if (key == "n_h") p.n_h = uint_field(v, key);
        else if (key == "alpha1") p.alpha1 = real_field(v, key);
        else if (key == "alpha2") p.alpha2 = real_field(v, key);
        else if (key == "alpha3") p.alpha3 = real_field(v, key);
        else if (key == "defender_basis")
            p.defender_basis = enum_field(v, key, {DefenderBasis::BadBots, DefenderBasis::Humans});
        else if (key == "p_g") p.p_g = real_field(v, key);
        else if (key == "p_c") p.p_c = real_field(v, key);
        else if (key == "p_p") p.p_p = real_field(v, key);
        else if (key == "threshold_t") p.threshold_t = uint_field(v, key);
        else if (key == "max_ticks") p.max_ticks = uint_field(v, key);
        else if (key == "network_model")
            p.network.model = enum_field(v, key, {NetworkModel::WattsStrogatz, NetworkModel::ErdosRenyi});
        else if (key == "k") p.network.k = uint_field(v, key);
        else if (key == "beta") p.network.beta = real_field(v, key);
        else if (key == "relay_mode") p.relay_mode = enum_field(v, key, {RelayMode::SingleAlter, RelayMode::EveryAlter});
        else if (key == "echo_suppression") p.echo_suppression = bool_field(v, key);
        else if (key == "flip_rule") p.flip_rule = enum_field(v, key, {FlipRule::GrossCounters, FlipRule::NetDifference});
        else if (key == "seed") p.seed = uint_field(v, key);
        else if (key == "experiment") {
            const std::string s = v.is_number_integer() ? std::to_string(v.get<std::int64_t>()) : string_field(v, key);
            try {
                c.experiment = parse_experiment_id(s);
            } catch (const ParameterError& e) {
                bad_field(key, e.what());
            }
        } else if (key == "replications") c.replications = uint_field(v, key);
        else if (key == "base_seed") c.base_seed = uint_field(v, key);
        else if (key == "jobs") c.jobs = uint_field(v, key);
        else if (key == "out") c.out = string_field(v, key);
    }

    try {
        p.validate();
    } catch (const ParameterError& e) {
        throw ParameterError(std::string("invalid config: ") + e.what());
    }
    if (c.replications < 1) bad_field("replications", "must be at least 1");
    if (c.jobs < 1) bad_field("jobs", "must be at least 1");
    return c;
}

CliConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParameterError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

nlohmann::ordered_json params_to_json(const SimParams& p) {
    nlohmann::ordered_json j;
    j["n_h"] = p.n_h;
    j["alpha1"] = rounded(p.alpha1);
    j["alpha2"] = rounded(p.alpha2);
    j["alpha3"] = rounded(p.alpha3);
    j["defender_basis"] = to_string(p.defender_basis);
    j["p_g"] = rounded(p.p_g);
    j["p_c"] = rounded(p.p_c);
    j["p_p"] = rounded(p.p_p);
    j["threshold_t"] = p.threshold_t;
    j["max_ticks"] = p.max_ticks;
    j["network_model"] = to_string(p.network.model);
    j["k"] = p.network.k;
    j["beta"] = rounded(p.network.beta);
    j["relay_mode"] = to_string(p.relay_mode);
    j["echo_suppression"] = p.echo_suppression;
    j["flip_rule"] = to_string(p.flip_rule);
    j["seed"] = p.seed;
    return j;
}

}  // namespace botsim::cli
