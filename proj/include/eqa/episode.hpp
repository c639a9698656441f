#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eqa/enrichment.hpp"
#include "eqa/planner.hpp"
#include "eqa/worldgen.hpp"

namespace eqa {

struct EpisodeConfig {
    int t_max = 10;
    double conf_threshold = 0.9;
    int k = 2;
    int j = 3;
    double d = 2.0;
    int sampling_period = 3;
    int min_cluster_size = 2;
    Ablation ablation = Ablation::None;
    uint64_t seed = 0;
    CameraModel camera;
    int planner_retries = 1;  // re-prompts after an invalid output
};

enum class TerminationReason { Confident, Threshold, MaxSteps, PlannerError };
const char* termination_reason_name(TerminationReason r);

struct TerminationDecision {
    bool stop = false;
    TerminationReason reason = TerminationReason::Confident;
};

// Stop(Confident) iff c_t; else Stop(Threshold) iff p > threshold (strict);
// else Stop(MaxSteps) iff t >= t_max; else continue.
TerminationDecision check_termination(const PlannerOutput& out, int t, const EpisodeConfig& cfg);

// One line-delimited transcript record per planning step.
struct StepRecord {
    int t = 0;
    std::string state;
    std::string action;  // "none" when terminal
    std::string answer;  // letter
    bool is_confident = false;
    double confidence_level = 0.0;
    std::vector<std::string> frontier_ids;
    int n_rooms = 0, n_regions = 0, n_objects = 0, n_frontiers = 0;
    int n_images = 0;  // planner input images this step
    double traj_len_so_far = 0.0;
};

std::string step_record_json(const StepRecord& r);

struct EpisodeResult {
    int answer_index = -1;
    bool success = false;
    int planning_steps = 0;
    double trajectory_length_m = 0.0;
    TerminationReason termination_reason = TerminationReason::PlannerError;
    std::vector<StepRecord> transcript;
    std::vector<CellPose> path_taken;        // full motion trajectory
    std::vector<Vec2> final_frontier_centroids;
    std::string error;  // set for PlannerError
};

struct ExecutionResult {
    std::vector<CellPose> trajectory;  // re-oriented start pose first
    std::vector<Observation> observations;
    double path_length_m = 0.0;
};

// Walks the shortest belief-space path to the free cell nearest the action's
// node, camera facing the node at every waypoint, one observation per
// waypoint. Falls back to the nearest reachable free cell when the belief map
// cuts the target off.
ExecutionResult execute_action(const World& world, const OccupancyGrid& grid,
                               const SceneGraph& sg, const Action& action,
                               const CameraModel& camera, int t_start);

// Everything a planner callback may consult besides the wire input. The
// scripted planner reads the ground truth; remote planners ignore it.
struct PlannerContext {
    const World& world;
    const SceneGraph& sg;
    const VisualMemory& mem;
    const Snapshot& current_view;
    Ablation ablation;
};

using PlannerFn = std::function<std::string(const PlannerInput&, const PlannerContext&)>;

EpisodeResult run_episode(const World& world, const PlannerFn& planner, const EpisodeConfig& cfg);

struct Metrics {
    double success_rate_pct = 0.0;
    std::optional<double> avg_planning_steps;  // successful episodes only
    std::optional<double> avg_traj_len_m;
    int n = 0;
};

Metrics compute_metrics(const std::vector<EpisodeResult>& results);

}  // namespace eqa
