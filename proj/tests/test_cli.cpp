#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "gld/cli.hpp"
#include "gld/scm_gen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run gld_run(std::vector<std::string> args) {
    args.insert(args.begin(), "gld");
    std::ostringstream out, err;
    int code = gld::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("gld_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string write(const std::string& name, const std::string& text) {
        std::ofstream(dir / name) << text;
        return (dir / name).string();
    }

    fs::path dir;
};

// two switching links over four equal quadrants of the index set
gld::ScmSpec quadrant_spec(std::size_t n) {
    gld::ScmSpec s;
    s.dag = gld::Dag(4);
    s.dag.add_edge(0, 1);
    s.dag.add_edge(2, 1);
    s.dag.add_edge(2, 3);
    s.edges = {{0, 1, 0.9, 1}, {2, 1, 1.5, -1}, {2, 3, 0.9, 1}};
    s.noise.assign(4, gld::NoiseSpec{});
    s.changing.push_back({0, 1, gld::Indicator::from_runs({n / 2, n / 2})});
    s.changing.push_back({2, 3, gld::Indicator::from_runs({n / 4, n / 4, n / 4, n / 4})});
    s.samples = n;
    return s;
}

}  // namespace

TEST_F(Cli, GenerateMinimal) {
    auto cfg = write("cfg.json", R"({"schema": 1, "nodes": 2, "samples": 500, "changing": 0})");
    auto r = gld_run({"generate", "--config", cfg, "--out", (dir / "a").string(), "--seed", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream in(dir / "a" / "dataset.csv");
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "X0,X1");
    auto spec = json::parse(slurp(dir / "a" / "spec.json"));
    EXPECT_EQ(spec["seed"], 4);
}

TEST_F(Cli, GenerateMissingKey) {
    auto cfg = write("cfg.json", R"({"schema": 1, "samples": 500})");
    auto r = gld_run({"generate", "--config", cfg, "--out", dir.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("nodes"), std::string::npos);
    EXPECT_EQ(gld_run({"generate", "--config", (dir / "missing.json").string()}).code, 2);
}

TEST_F(Cli, GenerateDeterministic) {
    auto cfg = write("cfg.json", R"({"schema": 1, "nodes": 4, "samples": 3000, "changing": 1, "ell_min": 200, "ell_max": 1000})");
    ASSERT_EQ(gld_run({"generate", "--config", cfg, "--out", (dir / "a").string(), "--seed", "9"}).code, 0);
    ASSERT_EQ(gld_run({"generate", "--config", cfg, "--out", (dir / "b").string(), "--seed", "9"}).code, 0);
    ASSERT_EQ(gld_run({"generate", "--config", cfg, "--out", (dir / "c").string(), "--seed", "10"}).code, 0);
    EXPECT_EQ(slurp(dir / "a" / "dataset.csv"), slurp(dir / "b" / "dataset.csv"));
    EXPECT_EQ(slurp(dir / "a" / "spec.json"), slurp(dir / "b" / "spec.json"));
    EXPECT_NE(slurp(dir / "a" / "dataset.csv"), slurp(dir / "c" / "dataset.csv"));
}

TEST_F(Cli, DiscoverStationary) {
    auto cfg = write("cfg.json", R"({"schema": 1, "nodes": 2, "samples": 4000, "changing": 0})");
    ASSERT_EQ(gld_run({"generate", "--config", cfg, "--out", dir.string(), "--seed", "2"}).code, 0);
    auto r = gld_run({"discover", (dir / "dataset.csv").string(), "--prior", "large"});
    ASSERT_NE(r.code, 2) << r.err;
    auto j = json::parse(r.out);
    EXPECT_EQ(j["states"].size(), 1u);
    EXPECT_EQ(j["variables"].size(), 2u);
    EXPECT_TRUE(j["diagnostics"]["tests"].size() > 0);
    EXPECT_EQ(j["config"]["alpha_weak"], 0.05);

    auto w = gld_run({"discover", (dir / "dataset.csv").string(), "--prior", "large-weak20"});
    ASSERT_NE(w.code, 2) << w.err;
    EXPECT_EQ(json::parse(w.out)["config"]["alpha_weak"], 0.2);
    auto o = gld_run({"discover", (dir / "dataset.csv").string(), "--prior", "large-weak20", "--alpha-weak", "0.1"});
    EXPECT_EQ(json::parse(o.out)["config"]["alpha_weak"], 0.1);
}

TEST_F(Cli, DiscoverBadInput) {
    auto bad = write("bad.csv", "a,b\n1,2\n3\n");
    EXPECT_EQ(gld_run({"discover", bad}).code, 2);
    EXPECT_EQ(gld_run({"discover", (dir / "none.csv").string()}).code, 2);
    auto ok = write("ok.csv", "a,b\n1,2\n3,4\n");
    EXPECT_EQ(gld_run({"discover", ok, "--prior", "huge"}).code, 2);
    EXPECT_EQ(gld_run({"discover", ok, "--alpha", "2"}).code, 2);
    EXPECT_EQ(gld_run({}).code, 2);
    EXPECT_EQ(gld_run({"frobnicate"}).code, 2);
}

TEST_F(Cli, DiscoverQuadrantModel) {
    const std::size_t n = 10000;
    auto spec = quadrant_spec(n);
    std::ofstream(dir / "spec.json") << gld::to_json(spec).dump();
    int hits = 0;
    const int seeds = 10;
    for (int s = 0; s < seeds; ++s) {
        auto data = gld::simulate(spec, n, 100 + s);
        std::ofstream csv(dir / "data.csv");
        gld::write_csv(csv, data);
        csv.close();
        auto r = gld_run({"discover", (dir / "data.csv").string(), "--prior", "large", "--out",
                          (dir / "result.json").string()});
        ASSERT_NE(r.code, 2) << r.err;
        auto j = json::parse(slurp(dir / "result.json"));
        int changing = 0;
        for (const auto& e : j["union"]["edges"]) changing += e["changing"].get<bool>();
        hits += changing == 2 && j["states"].size() == 4;

        auto e = gld_run({"eval", "--result", (dir / "result.json").string(), "--spec", (dir / "spec.json").string()});
        ASSERT_EQ(e.code, 0) << e.err;
        EXPECT_TRUE(json::parse(e.out).contains("regime"));
    }
    EXPECT_GE(hits, 7);
}

TEST_F(Cli, BenchRowsAndDeterminism) {
    auto cfg = write("bench.json", R"({"schema": 1, "grid": {"samples": [1000], "nodes": [4]}, "seeds": 2, "seed": 5})");
    ASSERT_EQ(gld_run({"bench", "--config", cfg, "--out", (dir / "a").string()}).code, 0);
    ASSERT_EQ(gld_run({"bench", "--config", cfg, "--out", (dir / "b").string(), "--jobs", "2"}).code, 0);
    auto csv = slurp(dir / "a" / "bench.csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 2 * 3 + 3);
    EXPECT_EQ(csv, slurp(dir / "b" / "bench.csv"));
    EXPECT_EQ(slurp(dir / "a" / "bench.json"), slurp(dir / "b" / "bench.json"));
    auto bad = write("bad.json", R"({"grid": {}})");
    EXPECT_EQ(gld_run({"bench", "--config", bad}).code, 2);
}

TEST_F(Cli, EvalErrors) {
    auto junk = write("junk.json", "{\"union\": 3}");
    EXPECT_EQ(gld_run({"eval", "--result", junk, "--spec", junk}).code, 2);
    EXPECT_EQ(gld_run({"eval", "--result", junk}).code, 2);
}
