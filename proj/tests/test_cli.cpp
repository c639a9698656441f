#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "eqa/batch.hpp"
#include "eqa/cli.hpp"
#include "eqa/worldgen.hpp"
#include "helpers.hpp"

using namespace eqa;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(bool(in), "missing file ", p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("eqa_cli_" + std::to_string(rand()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("help exits 0, unknown flags exit 2") {
    CHECK(run_command({"--help"}) == 0);
    CHECK(run_command({"run", "--no-such-flag"}) == 2);
    CHECK(run_command({}) == 2);
    CHECK(run_command({"run"}) == 2);  // --out is required
}

TEST_CASE("generate writes loadable scenario files") {
    TempDir tmp;
    const std::string out = (tmp.path / "worlds").string();
    CHECK(run_command({"generate", "--seeds", "0..2", "--out", out}) == 0);
    for (int seed = 0; seed <= 2; ++seed) {
        const World w = load_scenario_file(out + "/scenario_" + std::to_string(seed) + ".txt");
        CHECK(validate_world(w).empty());
        CHECK(save_scenario(w) == save_scenario(generate_world(uint64_t(seed))));
    }
}

TEST_CASE("run produces deterministic metrics and per-episode artifacts") {
    TempDir tmp;
    const std::string out_a = (tmp.path / "a").string();
    const std::string out_b = (tmp.path / "b").string();
    CHECK(run_command({"run", "--planner", "scripted", "--seeds", "0..3", "--out", out_a}) == 0);
    CHECK(run_command({"run", "--planner", "scripted", "--seeds", "0..3", "--out", out_b,
                       "--jobs", "4"}) == 0);

    const std::string csv = slurp(fs::path(out_a) / "metrics.csv");
    CHECK(csv == slurp(fs::path(out_b) / "metrics.csv"));
    CHECK(csv.rfind("episode_id,seed,success,planning_steps,traj_len_m,answer,correct,"
                    "termination_reason\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 episodes

    for (const char* suffix : {"_transcript.jsonl", "_trajectory.svg"})
        for (int i = 0; i < 4; ++i)
            CHECK(fs::exists(fs::path(out_a) / ("ep_" + std::to_string(i) + suffix)));
    CHECK(fs::exists(fs::path(out_a) / "manifest.json"));
    CHECK(slurp(fs::path(out_a) / "ep_0_trajectory.svg").rfind("<svg", 0) == 0);
}

TEST_CASE("run accepts scenario files") {
    TempDir tmp;
    const World w = generate_world(11);
    const std::string scenario = (tmp.path / "scenario.txt").string();
    save_scenario_file(w, scenario);
    const std::string out = (tmp.path / "run").string();
    CHECK(run_command({"run", "--scenario", scenario, "--out", out}) == 0);
    const std::string csv = slurp(fs::path(out) / "metrics.csv");
    CHECK(csv.find("ep_0") != std::string::npos);
    CHECK(run_command({"run", "--scenario", (tmp.path / "missing.txt").string(), "--out", out}) ==
          1);
}

TEST_CASE("sg-only transcripts carry zero images per step") {
    TempDir tmp;
    const std::string out = (tmp.path / "sg").string();
    CHECK(run_command({"run", "--seeds", "0..1", "--ablation", "sg-only", "--tmax", "3", "--out",
                       out}) == 0);
    const std::string transcript = slurp(fs::path(out) / "ep_0_transcript.jsonl");
    CHECK(transcript.find("\"n_images\":0") != std::string::npos);
    CHECK(transcript.find("\"n_images\":1") == std::string::npos);
    CHECK(run_command({"run", "--seeds", "0", "--ablation", "bogus", "--out", out}) == 2);
}

TEST_CASE("flags override the config file") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "eqa.cfg";
    {
        std::ofstream out(cfg);
        out << "[run]\ntmax=3\nk=1\n";
    }
    const std::string out_dir = (tmp.path / "cfgrun").string();
    CHECK(run_command({"run", "--config", cfg.string(), "--seeds", "0", "--tmax", "5", "--out",
                       out_dir}) == 0);
    const std::string manifest = slurp(fs::path(out_dir) / "manifest.json");
    CHECK(manifest.find("\"t_max\": 5") != std::string::npos);  // flag wins
    CHECK(manifest.find("\"k\": 1") != std::string::npos);      // config applies
}

TEST_CASE("report aggregates run directories") {
    TempDir tmp;
    const std::string a = (tmp.path / "a").string();
    const std::string b = (tmp.path / "b").string();
    REQUIRE(run_command({"run", "--seeds", "0..1", "--out", a}) == 0);
    REQUIRE(run_command({"run", "--seeds", "0..1", "--ablation", "sg-only", "--tmax", "3",
                         "--out", b}) == 0);
    const std::string table = report_table({a, b});
    CHECK(table.find("scripted") != std::string::npos);
    CHECK(table.find("sg-only") != std::string::npos);
    CHECK(table.find("success_rate_pct") != std::string::npos);
    CHECK(run_command({"report", "--in", a, "--in", b}) == 0);
    CHECK(run_command({"report", "--in", (tmp.path / "nope").string()}) == 1);
}
