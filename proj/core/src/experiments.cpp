#include "botsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "botsim/errors.hpp"

namespace botsim {

namespace {

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

double tenths(int i) { return static_cast<double>(i) / 10.0; }

constexpr const char* kRecordHeader =
    "experiment,condition_index,replicate_index,seed,n_h,alpha1,alpha2,alpha3,defender_basis,p_g,p_c,p_p,"
    "threshold_t,max_ticks,network_model,k,beta,relay_mode,echo_suppression,flip_rule,"
    "bad_majority_tick,all_bad_tick,ticks_run";
constexpr std::size_t kRecordColumns = 23;

std::string optional_tick(const std::optional<std::uint64_t>& t) { return t ? std::to_string(*t) : std::string{}; }

std::string optional_real(const std::optional<double>& v) { return v ? format_real(*v) : std::string{}; }

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

class RowReader {
public:
    RowReader(std::size_t line, std::vector<std::string_view> fields) : line_(line), fields_(std::move(fields)) {}

    std::string_view text(std::size_t i) const { return fields_[i]; }

    std::uint64_t uint(std::size_t i, const char* name) const {
        std::uint64_t v = 0;
        const auto f = fields_[i];
        auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size())
            throw ParseError(line_, std::string("column ") + name + ": expected a non-negative integer, got '" +
                                        std::string(f) + "'");
        return v;
    }

    std::optional<std::uint64_t> optional_uint(std::size_t i, const char* name) const {
        if (fields_[i].empty()) return std::nullopt;
        return uint(i, name);
    }

    double real(std::size_t i, const char* name) const {
        double v = 0;
        const auto f = fields_[i];
        auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size())
            throw ParseError(line_, std::string("column ") + name + ": expected a number, got '" + std::string(f) + "'");
        return v;
    }

    template <class Enum>
    Enum choice(std::size_t i, const char* name, std::initializer_list<Enum> options) const {
        for (Enum e : options)
            if (fields_[i] == to_string(e)) return e;
        throw ParseError(line_, std::string("column ") + name + ": unknown value '" + std::string(fields_[i]) + "'");
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
    std::vector<std::string_view> fields_;
};

}  // namespace

std::string format_real(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

std::string_view to_string(ExperimentId id) noexcept {
    switch (id) {
        case ExperimentId::E1: return "E1";
        case ExperimentId::E2: return "E2";
        case ExperimentId::E3: return "E3";
        case ExperimentId::E4: return "E4";
        case ExperimentId::E5: return "E5";
        case ExperimentId::ThresholdSweep: return "threshold";
        case ExperimentId::Custom: return "custom";
    }
    return "custom";
}

ExperimentId parse_experiment_id(std::string_view text) {
    const std::string t = lower(text);
    if (t == "1" || t == "e1") return ExperimentId::E1;
    if (t == "2" || t == "e2") return ExperimentId::E2;
    if (t == "3" || t == "e3") return ExperimentId::E3;
    if (t == "4" || t == "e4") return ExperimentId::E4;
    if (t == "5" || t == "e5") return ExperimentId::E5;
    if (t == "threshold" || t == "thresholdsweep") return ExperimentId::ThresholdSweep;
    if (t == "custom") return ExperimentId::Custom;
    throw ParameterError("unknown experiment id '" + std::string(text) + "'");
}

void SweepSpec::validate() const {
    if (conditions.empty()) throw ParameterError("sweep has no conditions");
    if (replications < 1) throw ParameterError("replications must be at least 1");
    for (const SimParams& p : conditions) p.validate();
}

SweepSpec build_experiment(ExperimentId id, const SimParams& base, std::size_t replications, std::uint64_t base_seed) {
    SweepSpec spec;
    spec.experiment = id;
    spec.replications = replications;
    spec.base_seed = base_seed;
    auto add = [&](double a1, double a2, double a3) {
        SimParams p = base;
        p.alpha1 = a1;
        p.alpha2 = a2;
        p.alpha3 = a3;
        spec.conditions.push_back(p);
    };
    switch (id) {
        case ExperimentId::E1:
            for (int i = 1; i <= 10; ++i) add(tenths(i), 0.0, 0.0);
            break;
        case ExperimentId::E2:
            for (int i = 1; i <= 15; ++i) add(0.2, tenths(i), 0.0);
            break;
        case ExperimentId::E3:
            for (int i = 1; i <= 20; ++i) add(0.2, 0.0, tenths(i));
            break;
        case ExperimentId::E4:
            for (int i = 1; i <= 10; ++i)
                for (int j = 1; j <= 10; ++j) add(tenths(i), tenths(j), 0.0);
            break;
        case ExperimentId::E5:
            for (int i = 1; i <= 20; ++i)
                for (int j = 1; j <= 10; ++j) add(tenths(i), 0.0, tenths(j));
            spec.note = "alpha1 spans 0.1..2.0 as printed in the design table, giving 20x10=200 conditions "
                        "although the table's condition count reads 10*10=100";
            break;
        case ExperimentId::ThresholdSweep:
            for (int t = 10; t <= 100; t += 10) {
                SimParams p = base;
                p.alpha1 = 0.2;
                p.alpha2 = 0.0;
                p.alpha3 = 0.0;
                p.threshold_t = static_cast<std::uint64_t>(t);
                spec.conditions.push_back(p);
            }
            break;
        case ExperimentId::Custom:
            spec.conditions.push_back(base);
            break;
    }
    return spec;
}

std::uint64_t derive_run_seed(std::uint64_t base_seed, std::uint64_t condition, std::uint64_t replicate) noexcept {
    // splitmix64 is a bijection, so distinct (condition, replicate) words give
    // distinct seeds as long as the packed word is distinct.
    const std::uint64_t packed = (condition << 32) ^ (replicate & 0xffffffffULL);
    return splitmix64(splitmix64(base_seed) ^ packed);
}

std::vector<RunRecord> run_sweep(const SweepSpec& spec, std::size_t workers, const RunFunction& run,
                                 const ProgressFunction& progress) {
    spec.validate();
    const std::size_t total = spec.total_runs();
    std::vector<RunRecord> records(total);
    for (std::size_t c = 0; c < spec.conditions.size(); ++c) {
        for (std::size_t r = 0; r < spec.replications; ++r) {
            RunRecord& rec = records[c * spec.replications + r];
            rec.experiment = spec.experiment;
            rec.condition_index = c;
            rec.replicate_index = r;
            rec.params = spec.conditions[c];
            rec.params.seed = derive_run_seed(spec.base_seed, c, r);
        }
    }

    const RunFunction& runner = run ? run : RunFunction(run_simulation);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::optional<SweepError> first_error;
    std::mutex progress_mutex;

    auto work = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t task = next.fetch_add(1);
            if (task >= total) return;
            RunRecord& rec = records[task];
            try {
                const RunOutcome out = runner(rec.params);
                rec.bad_majority_tick = out.bad_majority_tick;
                rec.all_bad_tick = out.all_bad_tick;
                rec.ticks_run = out.ticks_run;
            } catch (const std::exception& e) {
                std::lock_guard lock(error_mutex);
                // Keep the lowest task index so the reported failure does not depend on scheduling.
                if (!first_error || task < first_error->condition() * spec.replications + first_error->replicate())
                    first_error.emplace(rec.condition_index, rec.replicate_index, e.what());
                failed = true;
                return;
            }
            const std::size_t finished = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(finished, total);
            }
        }
    };

    const std::size_t threads = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(total, 1));
    if (threads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(work);
    }
    if (first_error) throw *first_error;
    return records;
}

OutcomeSummary summarize_outcome(std::span<const std::optional<std::uint64_t>> ticks) {
    OutcomeSummary s;
    s.replicates = ticks.size();
    std::vector<double> values;
    for (const auto& t : ticks)
        if (t) values.push_back(static_cast<double>(*t));
    s.converged = values.size();
    s.dnc_fraction = ticks.empty() ? 0.0 : static_cast<double>(ticks.size() - values.size()) / static_cast<double>(ticks.size());
    if (values.empty()) return s;
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    s.mean = mean;
    if (values.size() >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

std::vector<ConditionSummary> summarize(std::span<const RunRecord> records) {
    if (records.empty()) throw ParameterError("no run records to summarize");
    std::map<std::size_t, std::vector<const RunRecord*>> groups;
    for (const RunRecord& r : records) groups[r.condition_index].push_back(&r);

    std::vector<ConditionSummary> out;
    out.reserve(groups.size());
    for (const auto& [index, members] : groups) {
        std::vector<std::optional<std::uint64_t>> majority, all_bad;
        for (const RunRecord* r : members) {
            majority.push_back(r->bad_majority_tick);
            all_bad.push_back(r->all_bad_tick);
        }
        ConditionSummary cs;
        cs.experiment = members.front()->experiment;
        cs.condition_index = index;
        cs.params = members.front()->params;
        cs.bad_majority = summarize_outcome(majority);
        cs.all_bad = summarize_outcome(all_bad);
        out.push_back(std::move(cs));
    }
    return out;
}

void write_records_csv(std::span<const RunRecord> records, std::ostream& out) {
    out << kRecordHeader << '\n';
    for (const RunRecord& r : records) {
        const SimParams& p = r.params;
        out << to_string(r.experiment) << ',' << r.condition_index << ',' << r.replicate_index << ',' << p.seed << ','
            << p.n_h << ',' << format_real(p.alpha1) << ',' << format_real(p.alpha2) << ',' << format_real(p.alpha3)
            << ',' << to_string(p.defender_basis) << ',' << format_real(p.p_g) << ',' << format_real(p.p_c) << ','
            << format_real(p.p_p) << ',' << p.threshold_t << ',' << p.max_ticks << ','
            << to_string(p.network.model) << ',' << p.network.k << ',' << format_real(p.network.beta) << ','
            << to_string(p.relay_mode) << ',' << (p.echo_suppression ? 1 : 0) << ',' << to_string(p.flip_rule)
            << ',' << optional_tick(r.bad_majority_tick) << ',' << optional_tick(r.all_bad_tick) << ','
            << r.ticks_run << '\n';
    }
}

std::vector<RunRecord> read_records_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw ParseError(1, "missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kRecordHeader) {
        const auto expected = split(kRecordHeader);
        const auto got = split(line);
        std::string missing;
        for (std::string_view name : expected)
            if (std::find(got.begin(), got.end(), name) == got.end())
                missing += (missing.empty() ? "" : ", ") + std::string(name);
        if (!missing.empty()) throw ParseError(1, "missing columns: " + missing);
        throw ParseError(1, "unexpected header; columns must appear in the runs.csv order");
    }

    std::vector<RunRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split(line);
        if (fields.size() != kRecordColumns)
            throw ParseError(line_no, "expected " + std::to_string(kRecordColumns) + " fields, got " +
                                          std::to_string(fields.size()));
        RowReader row(line_no, std::move(fields));
        RunRecord r;
        try {
            r.experiment = parse_experiment_id(row.text(0));
        } catch (const ParameterError&) {
            throw ParseError(line_no, "column experiment: unknown id '" + std::string(row.text(0)) + "'");
        }
        r.condition_index = row.uint(1, "condition_index");
        r.replicate_index = row.uint(2, "replicate_index");
        SimParams& p = r.params;
        p.seed = row.uint(3, "seed");
        p.n_h = row.uint(4, "n_h");
        p.alpha1 = row.real(5, "alpha1");
        p.alpha2 = row.real(6, "alpha2");
        p.alpha3 = row.real(7, "alpha3");
        p.defender_basis = row.choice(8, "defender_basis", {DefenderBasis::BadBots, DefenderBasis::Humans});
        p.p_g = row.real(9, "p_g");
        p.p_c = row.real(10, "p_c");
        p.p_p = row.real(11, "p_p");
        p.threshold_t = row.uint(12, "threshold_t");
        p.max_ticks = row.uint(13, "max_ticks");
        p.network.model = row.choice(14, "network_model", {NetworkModel::WattsStrogatz, NetworkModel::ErdosRenyi});
        p.network.k = row.uint(15, "k");
        p.network.beta = row.real(16, "beta");
        p.relay_mode = row.choice(17, "relay_mode", {RelayMode::SingleAlter, RelayMode::EveryAlter});
        const std::uint64_t echo = row.uint(18, "echo_suppression");
        if (echo > 1) throw ParseError(line_no, "column echo_suppression: expected 0 or 1");
        p.echo_suppression = echo == 1;
        p.flip_rule = row.choice(19, "flip_rule", {FlipRule::GrossCounters, FlipRule::NetDifference});
        r.bad_majority_tick = row.optional_uint(20, "bad_majority_tick");
        r.all_bad_tick = row.optional_uint(21, "all_bad_tick");
        r.ticks_run = row.uint(22, "ticks_run");
        records.push_back(r);
    }
    return records;
}

void write_records_csv(std::span<const RunRecord> records, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_records_csv(records, out);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<RunRecord> read_records_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_records_csv(in);
}

void write_summary_csv(std::span<const ConditionSummary> summaries, std::ostream& out) {
    out << "experiment,condition_index,n_h,alpha1,alpha2,alpha3,defender_basis,threshold_t,replicates,"
           "majority_converged,majority_mean,majority_sd,majority_dnc_fraction,"
           "all_bad_converged,all_bad_mean,all_bad_sd,all_bad_dnc_fraction\n";
    for (const ConditionSummary& s : summaries) {
        const SimParams& p = s.params;
        out << to_string(s.experiment) << ',' << s.condition_index << ',' << p.n_h << ',' << format_real(p.alpha1)
            << ',' << format_real(p.alpha2) << ',' << format_real(p.alpha3) << ',' << to_string(p.defender_basis)
            << ',' << p.threshold_t << ',' << s.bad_majority.replicates << ',' << s.bad_majority.converged << ','
            << optional_real(s.bad_majority.mean) << ',' << optional_real(s.bad_majority.sd) << ','
            << format_real(s.bad_majority.dnc_fraction) << ',' << s.all_bad.converged << ','
            << optional_real(s.all_bad.mean) << ',' << optional_real(s.all_bad.sd) << ','
            << format_real(s.all_bad.dnc_fraction) << '\n';
    }
}

}  // namespace botsim
