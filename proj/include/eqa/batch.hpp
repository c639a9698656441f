#pragma once

#include <string>
#include <vector>

#include "eqa/episode.hpp"

namespace eqa {

// What a `run` invocation executes: either scenario files or generated seeds,
// one planner spec, config overrides, and an output directory.
struct RunManifest {
    std::vector<std::string> scenario_paths;
    std::vector<uint64_t> seeds;  // used when scenario_paths is empty
    WorldGenParams gen;
    std::string planner = "scripted";  // scripted | remote
    std::string endpoint;
    EpisodeConfig cfg;
    std::string out_dir;
    int jobs = 1;
};

struct BatchEpisode {
    std::string id;
    uint64_t seed = 0;
    int correct_index = 0;
    EpisodeResult result;
};

struct BatchResult {
    std::vector<BatchEpisode> episodes;
    Metrics metrics;
};

// Runs every episode (OpenMP-parallel up to `jobs`), deterministically
// ordered by episode id. Does not touch the filesystem.
BatchResult run_batch(const RunManifest& manifest);

// episode_id,seed,success,planning_steps,traj_len_m,answer,correct,termination_reason
std::string metrics_csv(const BatchResult& batch);

std::string manifest_json(const RunManifest& manifest);

// Grid + trajectory + frontier centroid overlay for one episode.
std::string trajectory_svg(const World& world, const EpisodeResult& result);

// Writes metrics.csv, manifest.json, summary.txt, and per-episode
// transcript/SVG files under manifest.out_dir.
void write_batch_outputs(const RunManifest& manifest, const BatchResult& batch);

// method | ablation | n | success_rate_pct | avg_steps | avg_traj_len_m rows
// aggregated from run directories (each holding manifest.json + metrics.csv).
std::string report_table(const std::vector<std::string>& run_dirs);

}  // namespace eqa
