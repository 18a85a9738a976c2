#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "botsim/experiments.hpp"
#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int status;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "botsim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status = botsim::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("botsim-cli-" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("run is byte-reproducible") {
    TempDir dir;
    write_text(dir / "small.json", R"({"n_h": 300, "alpha1": 0.2})");
    REQUIRE(cli({"run", "--config", dir / "small.json", "--seed", "7", "--out", dir / "a", "--series"}).status == 0);
    REQUIRE(cli({"run", "--config", dir / "small.json", "--seed", "7", "--out", dir / "b"}).status == 0);
    CHECK(slurp(dir / "a/outcome.json") == slurp(dir / "b/outcome.json"));
    CHECK(fs::exists(dir / "a/timeseries.csv"));
    CHECK_FALSE(fs::exists(dir / "b/timeseries.csv"));
}

TEST_CASE("run with defaults terminates within the tick cap") {
    TempDir dir;
    const auto r = cli({"run", "--out", dir / "o"});
    REQUIRE(r.status == 0);
    const auto doc = nlohmann::json::parse(slurp(dir / "o/outcome.json"));
    CHECK((doc["all_bad_tick"].is_null() || doc["all_bad_tick"].get<int>() <= 100));
    CHECK(doc["params"]["n_h"] == 1000);
    CHECK(r.out.find("all_bad_tick") != std::string::npos);
}

TEST_CASE("config errors name the field") {
    TempDir dir;
    write_text(dir / "bad.json", R"({"p_c": 1.5})");
    auto r = cli({"run", "--config", dir / "bad.json", "--out", dir / "o"});
    CHECK(r.status != 0);
    CHECK(r.err.find("p_c") != std::string::npos);

    write_text(dir / "unknown.json", R"({"p_x": 0.5})");
    r = cli({"run", "--config", dir / "unknown.json"});
    CHECK(r.status != 0);
    CHECK(r.err.find("p_x") != std::string::npos);

    write_text(dir / "type.json", R"({"n_h": "many"})");
    r = cli({"run", "--config", dir / "type.json"});
    CHECK(r.status != 0);
    CHECK(r.err.find("n_h") != std::string::npos);
}

TEST_CASE("sweep E1 writes 150 rows regardless of jobs") {
    TempDir dir;
    auto r1 = cli({"sweep", "--experiment", "1", "--replications", "15", "--seed", "5", "--jobs", "1", "--out", dir / "j1", "--quiet"});
    auto r4 = cli({"sweep", "--experiment", "1", "--replications", "15", "--seed", "5", "--jobs", "4", "--out", dir / "j4", "--quiet"});
    REQUIRE(r1.status == 0);
    REQUIRE(r4.status == 0);
    const std::string runs = slurp(dir / "j1/runs.csv");
    CHECK(runs == slurp(dir / "j4/runs.csv"));
    CHECK(std::count(runs.begin(), runs.end(), '\n') == 151);
    CHECK(fs::exists(dir / "j1/summary.csv"));
}

TEST_CASE("threshold sweep covers t = 10..100") {
    TempDir dir;
    write_text(dir / "c.json", R"({"n_h": 200})");
    const auto r = cli({"sweep", "--experiment", "threshold", "--replications", "1", "--config", dir / "c.json", "--out", dir / "t"});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("10 conditions") != std::string::npos);
    const auto recs = botsim::read_records_csv(fs::path(dir / "t/runs.csv"));
    REQUIRE(recs.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) CHECK(recs[i].params.threshold_t == 10 * (i + 1));
}

TEST_CASE("sweep rejects unknown experiments and unwritable outputs") {
    TempDir dir;
    CHECK(cli({"sweep", "--experiment", "9", "--out", dir / "x"}).status != 0);
    write_text(dir / "file", "x");
    CHECK(cli({"sweep", "--experiment", "1", "--replications", "1", "--out", dir / "file/sub"}).status != 0);
}

TEST_CASE("analyze power") {
    auto r = cli({"analyze", "power", "--eta2", "0.85", "--groups", "3"});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("f 2.38048") != std::string::npos);
    CHECK(r.out.find("n per group 1.95") != std::string::npos);

    r = cli({"analyze", "power", "--eta2", "0.85", "--f", "2", "--groups", "3"});
    CHECK(r.status != 0);
    r = cli({"analyze", "power", "--eta2", "1.2", "--groups", "3"});
    CHECK(r.status != 0);
}

TEST_CASE("analyze surface recovers a known quadratic") {
    TempDir dir;
    // Integer coefficients keep every sampled tick integral on the 0.1 grid.
    auto truth = [](double b, double d) { return 5 + 10 * b + 20 * d + 100 * b * d + 100 * b * b + 100 * d * d; };
    std::vector<botsim::RunRecord> recs;
    for (int i = 1; i <= 10; ++i)
        for (int j = 1; j <= 10; ++j) {
            botsim::RunRecord r;
            r.experiment = botsim::ExperimentId::E5;
            r.condition_index = recs.size();
            r.params.alpha1 = i / 10.0;
            r.params.alpha3 = j / 10.0;
            r.bad_majority_tick = static_cast<std::uint64_t>(std::llround(truth(i / 10.0, j / 10.0)));
            r.ticks_run = 100;
            recs.push_back(r);
        }
    botsim::write_records_csv(recs, fs::path(dir / "runs.csv"));
    const auto r = cli({"analyze", "surface", "--input", dir / "runs.csv", "--defender", "good", "--json", dir / "s.json",
                        "--grid", dir / "grid.csv", "--grid-size", "5"});
    REQUIRE(r.status == 0);
    const auto doc = nlohmann::json::parse(slurp(dir / "s.json"));
    const std::vector<std::pair<const char*, double>> expected{{"intercept", 5}, {"b", 10},    {"d", 20},
                                                               {"b*d", 100},     {"b^2", 100}, {"d^2", 100}};
    for (const auto& [name, value] : expected) CHECK(std::abs(doc["coefficients"][name].get<double>() - value) < 1e-9);
    CHECK(doc["stationary_point"]["kind"] == "min");
    const std::string grid = slurp(dir / "grid.csv");
    CHECK(std::count(grid.begin(), grid.end(), '\n') == 26);
}

TEST_CASE("analyze anova and ols on sweep-shaped data") {
    TempDir dir;
    std::vector<botsim::RunRecord> recs;
    std::mt19937_64 gen(1);
    std::uniform_int_distribution<int> jitter(0, 2);
    for (int type = 0; type < 3; ++type)
        for (int i = 1; i <= 5; ++i)
            for (int rep = 0; rep < 3; ++rep) {
                botsim::RunRecord r;
                r.params.alpha1 = type == 0 ? i / 10.0 : 0.2;
                r.params.alpha2 = type == 1 ? i / 10.0 : 0.0;
                r.params.alpha3 = type == 2 ? i / 10.0 : 0.0;
                r.bad_majority_tick = 10 + 4 * type + jitter(gen);
                r.ticks_run = 100;
                recs.push_back(r);
            }
    botsim::write_records_csv(recs, fs::path(dir / "runs.csv"));
    auto r = cli({"analyze", "anova", "--input", dir / "runs.csv", "--json", dir / "a.json"});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("C(bot_type)") != std::string::npos);
    const auto doc = nlohmann::json::parse(slurp(dir / "a.json"));
    CHECK(doc["terms"][0]["p"].get<double>() < 0.001);

    r = cli({"analyze", "ols", "--input", dir / "runs.csv"});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("Intercept") != std::string::npos);
    CHECK(r.out.find("dropped") != std::string::npos);
}

TEST_CASE("analyze errors") {
    TempDir dir;
    std::vector<botsim::RunRecord> recs(6);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        recs[i].params.alpha3 = 0.1 * static_cast<double>(i % 3 + 1);
        recs[i].bad_majority_tick = 10 + i;
    }
    botsim::write_records_csv(recs, fs::path(dir / "one.csv"));
    auto r = cli({"analyze", "anova", "--input", dir / "one.csv"});
    CHECK(r.status != 0);
    CHECK(r.err.find("bot_type") != std::string::npos);

    write_text(dir / "cols.csv", "experiment,condition_index,seed\nE1,0,1\n");
    r = cli({"analyze", "ols", "--input", dir / "cols.csv"});
    CHECK(r.status != 0);
    CHECK(r.err.find("replicate_index") != std::string::npos);
    CHECK(r.err.find("bad_majority_tick") != std::string::npos);

    CHECK(cli({"analyze", "anova", "--input", dir / "missing.csv"}).status != 0);
}

TEST_CASE("graph-stats") {
    TempDir dir;
    const auto r = cli({"graph-stats", "--seed", "3", "--edges", dir / "edges.txt"});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("nodes 1200") != std::string::npos);
    CHECK(r.out.find("edges 6000") != std::string::npos);
    const std::string edges = slurp(dir / "edges.txt");
    CHECK(std::count(edges.begin(), edges.end(), '\n') == 6000);
}
