#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "botsim/analysis.hpp"
#include "botsim/errors.hpp"
#include "botsim/experiments.hpp"
#include "botsim/network.hpp"
#include "botsim/stats/power.hpp"
#include "botsim/stats/regression.hpp"
#include "botsim/stats/surface.hpp"
#include "config.hpp"

namespace botsim::cli {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

struct GlobalOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<std::size_t> jobs;
    bool quiet = false;
};

struct AnalyzeOptions {
    std::string input;
    std::string outcome = "bad_majority";
    std::string dnc = "skip";
    std::string json;
    // surface
    std::string defender = "info_correction";
    std::vector<double> box;
    std::string grid;
    std::size_t grid_size = 21;
    // power
    std::optional<double> eta2;
    std::optional<double> f;
    int groups = 0;
    double alpha = 0.05;
    double power = 0.8;
};

CliConfig resolve_config(const GlobalOptions& g) {
    CliConfig c = g.config.empty() ? CliConfig{} : load_config(g.config);
    if (g.seed) {
        c.params.seed = *g.seed;
        c.base_seed = *g.seed;
    }
    if (!g.out.empty()) c.out = g.out;
    if (g.jobs) c.jobs = *g.jobs;
    if (c.jobs < 1) throw ParameterError("--jobs must be at least 1");
    return c;
}

fs::path prepare_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create output directory " + dir.string());
    return dir;
}

// Writes to a temporary sibling first so a failed write never leaves a
// truncated artifact behind.
template <class Writer>
void write_file(const fs::path& path, Writer&& writer) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
        writer(f);
        f.flush();
        if (!f) throw std::runtime_error("failed writing " + path.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("failed writing " + path.string() + ": " + ec.message());
}

ojson optional_json(const std::optional<std::uint64_t>& v) { return v ? ojson(*v) : ojson(nullptr); }

double rounded(double x) { return std::stod(format_real(x)); }

ojson finite_or_null(double x) { return std::isfinite(x) ? ojson(rounded(x)) : ojson(nullptr); }

std::string tick_text(const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : "DNC"; }

int cmd_run(const GlobalOptions& g, bool series, std::ostream& out) {
    const CliConfig c = resolve_config(g);
    const fs::path dir = prepare_out_dir(c.out);

    Simulation sim(c.params);
    std::vector<TickStats> ticks;
    const RunOutcome o = sim.run_to_completion([&](const TickStats& t) {
        if (series) ticks.push_back(t);
    });

    ojson doc;
    doc["bad_majority_tick"] = optional_json(o.bad_majority_tick);
    doc["all_bad_tick"] = optional_json(o.all_bad_tick);
    doc["ticks_run"] = o.ticks_run;
    doc["final_good_humans"] = o.final_good_humans;
    doc["final_bad_humans"] = o.final_bad_humans;
    doc["params"] = params_to_json(c.params);
    write_file(dir / "outcome.json", [&](std::ostream& f) { f << doc.dump(2) << '\n'; });
    if (series) write_file(dir / "timeseries.csv", [&](std::ostream& f) { write_time_series_csv(ticks, f); });

    if (!g.quiet) {
        out << "bad_majority_tick " << tick_text(o.bad_majority_tick) << '\n';
        out << "all_bad_tick " << tick_text(o.all_bad_tick) << '\n';
    }
    return 0;
}

int cmd_sweep(const GlobalOptions& g, const std::string& experiment, std::optional<std::size_t> replications,
              std::ostream& out, std::ostream& err) {
    CliConfig c = resolve_config(g);
    if (!experiment.empty()) c.experiment = parse_experiment_id(experiment);
    if (replications) c.replications = *replications;
    if (!c.experiment) throw ParameterError("sweep needs --experiment (or 'experiment' in the config)");
    if (c.replications < 1) throw ParameterError("--replications must be at least 1");

    const SweepSpec spec = build_experiment(*c.experiment, c.params, c.replications, c.base_seed);
    const fs::path dir = prepare_out_dir(c.out);
    if (!g.quiet) {
        out << "experiment " << to_string(spec.experiment) << ": " << spec.conditions.size() << " conditions, "
            << spec.total_runs() << " runs\n";
        if (!spec.note.empty()) out << "note: " << spec.note << '\n';
    }

    std::size_t last_decile = 0;
    ProgressFunction progress;
    if (!g.quiet)
        progress = [&](std::size_t done, std::size_t total) {
            const std::size_t decile = done * 10 / total;
            if (decile > last_decile) {
                last_decile = decile;
                err << "  " << done << "/" << total << " runs\n";
            }
        };
    const auto records = run_sweep(spec, c.jobs, {}, progress);
    const auto summaries = summarize(records);
    write_file(dir / "runs.csv", [&](std::ostream& f) { write_records_csv(records, f); });
    write_file(dir / "summary.csv", [&](std::ostream& f) { write_summary_csv(summaries, f); });
    if (!g.quiet) out << "wrote " << (dir / "runs.csv").string() << " and " << (dir / "summary.csv").string() << '\n';
    return 0;
}

std::vector<RunRecord> load_records(const AnalyzeOptions& a) {
    if (a.input.empty()) throw ParameterError("--input is required");
    try {
        return read_records_csv(fs::path(a.input));
    } catch (const ParseError& e) {
        throw ParseError(e.line(), a.input + ": " + e.what());
    }
}

void maybe_write_json(const AnalyzeOptions& a, const ojson& doc) {
    if (!a.json.empty()) write_file(a.json, [&](std::ostream& f) { f << doc.dump(2) << '\n'; });
}

std::string fmt(double x, int width = 12) {
    std::ostringstream s;
    s << std::setw(width) << format_real(x);
    return s.str();
}

int cmd_anova(const AnalyzeOptions& a, std::ostream& out) {
    const auto records = load_records(a);
    const auto obs = anova_observations(records, parse_outcome_measure(a.outcome), parse_dnc_policy(a.dnc));
    const stats::AnovaTable t = stats::anova_two_way(obs);

    out << "outcome " << a.outcome << " ~ C(bot_type) * proportion  (n = " << obs.size() << ")\n";
    out << std::left << std::setw(26) << "term" << std::right << std::setw(12) << "sum_sq" << std::setw(6) << "df"
        << std::setw(12) << "F" << std::setw(12) << "p" << std::setw(12) << "eta2" << '\n';
    ojson doc;
    doc["outcome"] = a.outcome;
    doc["n"] = obs.size();
    doc["terms"] = ojson::array();
    for (const auto& r : t.terms) {
        const double eta = stats::eta_squared(t, r.name);
        out << std::left << std::setw(26) << r.name << std::right << fmt(r.sum_sq) << std::setw(6) << r.df
            << fmt(r.f) << fmt(r.p) << fmt(eta) << '\n';
        doc["terms"].push_back({{"name", r.name},
                                {"sum_sq", rounded(r.sum_sq)},
                                {"df", r.df},
                                {"f", finite_or_null(r.f)},
                                {"p", rounded(r.p)},
                                {"eta2", rounded(eta)}});
    }
    out << std::left << std::setw(26) << "Residual" << std::right << fmt(t.residual_sum_sq) << std::setw(6)
        << t.residual_df << '\n';
    doc["residual"] = {{"sum_sq", rounded(t.residual_sum_sq)}, {"df", t.residual_df}};
    maybe_write_json(a, doc);
    return 0;
}

int cmd_ols(const AnalyzeOptions& a, std::ostream& out) {
    const auto records = load_records(a);
    const auto reg = fit_proportion_regression(records, parse_outcome_measure(a.outcome), parse_dnc_policy(a.dnc));
    const stats::LinearFit& fit = reg.fit;

    out << "outcome " << a.outcome << "  (n = " << fit.n << ")\n";
    out << std::left << std::setw(22) << "term" << std::right << std::setw(12) << "coef" << std::setw(12) << "std_err"
        << std::setw(12) << "t" << std::setw(12) << "p" << '\n';
    ojson doc;
    doc["outcome"] = a.outcome;
    doc["n"] = fit.n;
    doc["coefficients"] = ojson::array();
    for (std::size_t i = 0; i < fit.names.size(); ++i) {
        out << std::left << std::setw(22) << fit.names[i] << std::right << fmt(fit.coefficients[i])
            << fmt(fit.std_errors[i]) << fmt(fit.t_stats[i]) << fmt(fit.p_values[i]) << '\n';
        doc["coefficients"].push_back({{"name", fit.names[i]},
                                       {"coef", rounded(fit.coefficients[i])},
                                       {"std_err", rounded(fit.std_errors[i])},
                                       {"t", finite_or_null(fit.t_stats[i])},
                                       {"p", rounded(fit.p_values[i])}});
    }
    out << "R2 " << format_real(fit.r_squared) << "  adj R2 " << format_real(fit.adj_r_squared) << "  F "
        << format_real(fit.f_statistic) << "  p(F) " << format_real(fit.f_p_value) << '\n';
    if (!reg.dropped.empty()) {
        out << "dropped (collinear over this data):";
        for (const auto& d : reg.dropped) out << ' ' << d;
        out << '\n';
    }
    doc["r_squared"] = rounded(fit.r_squared);
    doc["adj_r_squared"] = rounded(fit.adj_r_squared);
    doc["f_statistic"] = finite_or_null(fit.f_statistic);
    doc["f_p_value"] = rounded(fit.f_p_value);
    doc["dropped"] = reg.dropped;
    maybe_write_json(a, doc);
    return 0;
}

int cmd_surface(const AnalyzeOptions& a, std::ostream& out) {
    const auto records = load_records(a);
    const auto points =
        surface_points(records, parse_defender_kind(a.defender), parse_outcome_measure(a.outcome), parse_dnc_policy(a.dnc));
    const stats::QuadraticSurface s = stats::fit_quadratic_surface(points);

    stats::Box box;
    if (a.box.empty()) {
        box = {points.front().b, points.front().b, points.front().d, points.front().d};
        for (const auto& p : points) {
            box.b_lo = std::min(box.b_lo, p.b);
            box.b_hi = std::max(box.b_hi, p.b);
            box.d_lo = std::min(box.d_lo, p.d);
            box.d_hi = std::max(box.d_hi, p.d);
        }
    } else if (a.box.size() == 4) {
        box = {a.box[0], a.box[1], a.box[2], a.box[3]};
    } else {
        throw ParameterError("--box takes four numbers: b_lo b_hi d_lo d_hi");
    }
    const auto sp = stats::surface_stationary_point(s);
    const auto ext = stats::surface_extrema_on_box(s, box);

    static constexpr const char* kNames[] = {"intercept", "b", "d", "b*d", "b^2", "d^2"};
    out << "T(b,d) for " << a.defender << " defenders, outcome " << a.outcome << " (n = " << points.size() << ")\n";
    ojson doc;
    doc["defender"] = a.defender;
    doc["outcome"] = a.outcome;
    doc["n"] = points.size();
    for (std::size_t i = 0; i < 6; ++i) {
        out << std::left << std::setw(10) << kNames[i] << std::right << fmt(s.beta[i], 14) << '\n';
        doc["coefficients"][kNames[i]] = rounded(s.beta[i]);
    }
    out << "stationary point: " << to_string(sp.kind);
    doc["stationary_point"]["kind"] = std::string(to_string(sp.kind));
    if (sp.kind != stats::StationaryKind::Degenerate) {
        out << " at b=" << format_real(sp.b) << " d=" << format_real(sp.d) << " T=" << format_real(sp.t);
        doc["stationary_point"]["b"] = rounded(sp.b);
        doc["stationary_point"]["d"] = rounded(sp.d);
        doc["stationary_point"]["t"] = rounded(sp.t);
    }
    out << '\n';
    out << "box [" << format_real(box.b_lo) << ", " << format_real(box.b_hi) << "] x [" << format_real(box.d_lo)
        << ", " << format_real(box.d_hi) << "]\n";
    out << "  min T=" << format_real(ext.min.t) << " at b=" << format_real(ext.min.b) << " d=" << format_real(ext.min.d)
        << '\n';
    out << "  max T=" << format_real(ext.max.t) << " at b=" << format_real(ext.max.b) << " d=" << format_real(ext.max.d)
        << '\n';
    doc["box"] = {rounded(box.b_lo), rounded(box.b_hi), rounded(box.d_lo), rounded(box.d_hi)};
    doc["min"] = {{"b", rounded(ext.min.b)}, {"d", rounded(ext.min.d)}, {"t", rounded(ext.min.t)}};
    doc["max"] = {{"b", rounded(ext.max.b)}, {"d", rounded(ext.max.d)}, {"t", rounded(ext.max.t)}};
    maybe_write_json(a, doc);

    if (!a.grid.empty()) {
        if (a.grid_size < 2) throw ParameterError("--grid-size must be at least 2");
        write_file(a.grid, [&](std::ostream& f) {
            f << "b,d,t\n";
            const double n = static_cast<double>(a.grid_size - 1);
            for (std::size_t i = 0; i < a.grid_size; ++i)
                for (std::size_t j = 0; j < a.grid_size; ++j) {
                    const double b = box.b_lo + (box.b_hi - box.b_lo) * static_cast<double>(i) / n;
                    const double d = box.d_lo + (box.d_hi - box.d_lo) * static_cast<double>(j) / n;
                    f << format_real(b) << ',' << format_real(d) << ',' << format_real(s(b, d)) << '\n';
                }
        });
    }
    return 0;
}

int cmd_power(const AnalyzeOptions& a, std::ostream& out) {
    if (a.eta2.has_value() == a.f.has_value()) throw ParameterError("give exactly one of --eta2 or --f");
    const double f = a.f ? *a.f : stats::cohens_f(*a.eta2);
    const stats::PowerSpec spec{f, a.groups, a.alpha, a.power};
    const auto n = stats::anova_power_required_n(spec);
    out << "f " << format_real(f) << '\n';
    out << "groups " << a.groups << "  alpha " << format_real(a.alpha) << "  power " << format_real(a.power) << '\n';
    out << "n per group " << format_real(n.continuous) << " (continuous), " << n.per_group << " (whole runs, power "
        << format_real(n.achieved_power) << ")\n";
    ojson doc;
    doc["f"] = rounded(f);
    if (a.eta2) doc["eta2"] = rounded(*a.eta2);
    doc["groups"] = a.groups;
    doc["alpha"] = rounded(a.alpha);
    doc["power"] = rounded(a.power);
    doc["n_continuous"] = rounded(n.continuous);
    doc["n_per_group"] = n.per_group;
    doc["achieved_power"] = rounded(n.achieved_power);
    maybe_write_json(a, doc);
    return 0;
}

int cmd_graph_stats(const GlobalOptions& g, const std::string& edges, std::ostream& out) {
    const CliConfig c = resolve_config(g);
    const Network net = build_network(c.params);
    const auto comp = largest_component(net);
    out << "nodes " << net.node_count() << '\n';
    out << "edges " << net.edge_count() << '\n';
    out << "mean_degree " << format_real(2.0 * static_cast<double>(net.edge_count()) / static_cast<double>(net.node_count()))
        << '\n';
    out << "clustering " << format_real(clustering_coefficient(net)) << '\n';
    out << "largest_component " << comp.size() << '\n';
    out << "mean_path_length " << format_real(mean_path_length(net)) << '\n';
    if (!edges.empty()) write_file(edges, [&](std::ostream& f) { write_edge_list(net, f); });
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bot-driven conspiracy diffusion simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--config", g.config, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "seed for run/graph-stats, base seed for sweep");
    app.add_option("--out", g.out, "output directory");
    app.add_option("--jobs", g.jobs, "worker threads for sweep");
    app.add_flag("--quiet", g.quiet, "suppress progress and summaries");

    bool series = false;
    auto* run = app.add_subcommand("run", "run one simulation");
    run->add_flag("--series", series, "also write timeseries.csv");

    std::string experiment;
    std::optional<std::size_t> replications;
    auto* sweep = app.add_subcommand("sweep", "run a named experiment design");
    sweep->add_option("--experiment", experiment, "1..5, threshold or custom");
    sweep->add_option("--replications", replications, "replicates per condition");

    AnalyzeOptions a;
    auto* analyze = app.add_subcommand("analyze", "statistics over sweep output");
    analyze->require_subcommand(1);
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--input", a.input, "runs.csv")->required();
        sub->add_option("--outcome", a.outcome, "bad_majority or all_bad");
        sub->add_option("--dnc", a.dnc, "skip or max_ticks");
        sub->add_option("--json", a.json, "also write the result as JSON");
    };
    auto* anova = analyze->add_subcommand("anova", "outcome ~ C(bot_type) * proportion");
    add_common(anova);
    auto* ols = analyze->add_subcommand("ols", "outcome on bot proportions, presence and interactions");
    add_common(ols);
    auto* surface = analyze->add_subcommand("surface", "quadratic response surface T(b, d)");
    add_common(surface);
    surface->add_option("--defender", a.defender, "info_correction or good");
    surface->add_option("--box", a.box, "b_lo b_hi d_lo d_hi (default: data range)")->expected(4);
    surface->add_option("--grid", a.grid, "write a (b, d, T) grid CSV");
    surface->add_option("--grid-size", a.grid_size, "grid points per axis");
    auto* power = analyze->add_subcommand("power", "runs per condition for a one-way ANOVA");
    auto* eta_opt = power->add_option("--eta2", a.eta2, "effect size eta squared");
    auto* f_opt = power->add_option("--f", a.f, "Cohen's f");
    eta_opt->excludes(f_opt);
    power->add_option("--groups", a.groups, "number of groups")->required();
    power->add_option("--alpha", a.alpha, "significance level");
    power->add_option("--power", a.power, "target power");
    power->add_option("--json", a.json, "also write the result as JSON");

    std::string edges;
    auto* graph = app.add_subcommand("graph-stats", "diagnostics of the generated network");
    graph->add_option("--edges", edges, "write the edge list");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*run) return cmd_run(g, series, out);
        if (*sweep) return cmd_sweep(g, experiment, replications, out, err);
        if (*graph) return cmd_graph_stats(g, edges, out);
        if (*anova) return cmd_anova(a, out);
        if (*ols) return cmd_ols(a, out);
        if (*surface) return cmd_surface(a, out);
        if (*power) return cmd_power(a, out);
    } catch (const ParseError& e) {
        err << "error: line " << e.line() << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace botsim::cli
