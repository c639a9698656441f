#include "eqa/episode.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "eqa/assets.hpp"
#include "eqa/errors.hpp"

namespace eqa {

const char* termination_reason_name(TerminationReason r) {
    switch (r) {
        case TerminationReason::Confident: return "Confident";
        case TerminationReason::Threshold: return "Threshold";
        case TerminationReason::MaxSteps: return "MaxSteps";
        case TerminationReason::PlannerError: return "PlannerError";
    }
    return "PlannerError";
}

TerminationDecision check_termination(const PlannerOutput& out, int t, const EpisodeConfig& cfg) {
    if (out.is_confident) return {true, TerminationReason::Confident};
    if (out.confidence_level > cfg.conf_threshold) return {true, TerminationReason::Threshold};
    if (t >= cfg.t_max) return {true, TerminationReason::MaxSteps};
    return {false, TerminationReason::Confident};
}

std::string step_record_json(const StepRecord& r) {
    nlohmann::ordered_json j;
    j["t"] = r.t;
    j["state"] = r.state;
    j["action"] = r.action;
    j["answer"] = r.answer;
    j["is_confident"] = r.is_confident;
    j["confidence_level"] = r.confidence_level;
    j["frontier_ids"] = r.frontier_ids;
    j["node_counts"] = {{"rooms", r.n_rooms},
                        {"regions", r.n_regions},
                        {"objects", r.n_objects},
                        {"frontiers", r.n_frontiers}};
    j["n_images"] = r.n_images;
    j["traj_len_so_far"] = r.traj_len_so_far;
    return j.dump();
}

ExecutionResult execute_action(const World& world, const OccupancyGrid& grid,
                               const SceneGraph& sg, const Action& action,
                               const CameraModel& camera, int t_start) {
    if (!sg.agent) throw UnplacedAgent("execute_action: no agent node");

    const Cell start = sg.agent->cell;
    Vec2 target_point;                 // what the camera tracks en route
    std::optional<Cell> target_cell;
    std::optional<Vec2> arrival_look;  // outward gaze for frontier arrivals
    if (action.kind == Action::Kind::GotoObjectNode) {
        const ObjectNode* node = sg.find_object(action.object_id);
        if (!node) throw StaleNode("execute_action: object '" + action.object_id + "' vanished");
        target_point = node->pos;
        target_cell = nearest_free_cell(grid, target_point);
    } else {
        const FrontierNode* node = sg.find_frontier(action.frontier_id);
        if (!node)
            throw StaleNode("execute_action: frontier '" + action.frontier_id + "' vanished");
        target_point = node->centroid;
        // Concave clusters put the centroid inside explored space; walk onto
        // the boundary itself: the member cell nearest the centroid.
        double best_d2 = 0;
        for (const Cell& c : node->cells) {
            if (!grid.is_free(c)) continue;
            const double d2v = dist2(cell_center(c, grid.cell_size()), target_point);
            if (!target_cell || d2v < best_d2 || (d2v == best_d2 && c < *target_cell)) {
                target_cell = c;
                best_d2 = d2v;
            }
        }
        if (!target_cell) target_cell = nearest_free_cell(grid, target_point);
        // Arrive looking into the unexplored side: the nearest still-unknown
        // 4-neighbor of the cluster (adjacent to the boundary, so the visit
        // always clears something).
        if (target_cell) {
            const Vec2 arrival = cell_center(*target_cell, grid.cell_size());
            std::optional<Cell> gap;
            double gap_d2 = 0;
            for (const Cell& c : node->cells)
                for (const Cell n : {Cell{c.x + 1, c.y}, Cell{c.x - 1, c.y}, Cell{c.x, c.y + 1},
                                     Cell{c.x, c.y - 1}}) {
                    if (!grid.in_bounds(n) || grid.at(n) != Belief::Unknown) continue;
                    const double d2v = dist2(cell_center(n, grid.cell_size()), arrival);
                    if (!gap || d2v < gap_d2 || (d2v == gap_d2 && n < *gap)) {
                        gap = n;
                        gap_d2 = d2v;
                    }
                }
            if (gap) arrival_look = cell_center(*gap, grid.cell_size());
        }
    }
    if (!target_cell) throw Unreachable("execute_action: no free cell in the belief map");

    // The belief map can hold free regions reachable only through cells not
    // yet observed (sightlines slip through diagonal gaps). When the strict
    // free-space path fails, walk the known-free prefix of an optimistic path
    // and face the first unknown cell so the gap gets observed.
    std::vector<Cell> path;
    std::optional<Vec2> final_look;
    try {
        path = shortest_path(grid, start, *target_cell);
    } catch (const Unreachable&) {
        bool planned = false;
        try {
            const std::vector<Cell> optimistic = optimistic_path(grid, start, *target_cell);
            size_t n_free = 0;
            while (n_free < optimistic.size() && grid.is_free(optimistic[n_free])) ++n_free;
            if (n_free >= 1 && n_free < optimistic.size()) {
                path.assign(optimistic.begin(), optimistic.begin() + long(n_free));
                final_look = cell_center(optimistic[n_free], grid.cell_size());
                planned = true;
            }
        } catch (const Unreachable&) {
        }
        if (!planned) {
            auto fallback = nearest_reachable_free_cell(grid, start, target_point);
            if (!fallback) throw;
            path = shortest_path(grid, start, *fallback);
        }
    }

    if (!final_look && arrival_look) final_look = arrival_look;

    ExecutionResult out;
    out.path_length_m = double(path.size() - 1) * grid.cell_size();
    Heading heading = sg.agent->heading;
    for (size_t i = 0; i < path.size(); ++i) {
        const Vec2 here = cell_center(path[i], grid.cell_size());
        Vec2 look = target_point;
        if (final_look && i + 1 == path.size()) look = *final_look;
        if (look.x != here.x || look.y != here.y)
            heading = bearing_to_heading(look.x - here.x, look.y - here.y);
        const CellPose pose{path[i], heading};
        out.trajectory.push_back(pose);
        out.observations.push_back(
            render_observation(world, pose, camera, t_start + int(i)));
    }
    return out;
}

EpisodeResult run_episode(const World& world, const PlannerFn& planner, const EpisodeConfig& cfg) {
    const Assets& assets = Assets::get();
    OccupancyGrid grid(world.width(), world.height(), world.cell_size());
    SceneGraph sg;
    sg.max_proximity_m = cfg.d;
    FrontierTracker tracker;
    VisualMemory mem;
    mem.capacity = cfg.k;
    LexicalOverlapScorer scorer;
    RuleBasedLabeler labeler = RuleBasedLabeler::from_assets();
    const std::set<std::string> keywords =
        extract_keywords(world.question().text, assets.stopwords);
    History hist;

    EpisodeResult result;
    int t_motion = 0;
    Observation current = render_observation(world, world.agent_spawn(), cfg.camera, t_motion++);
    integrate_observation(grid, current);
    std::vector<Snapshot> buffer;  // snapshots gathered during the last action

    for (int t_plan = 0;; ++t_plan) {
        update_scene_graph(sg, current, grid, world);

        const std::vector<Cell> frontier_cells = detect_frontier_cells(grid);
        std::vector<FrontierCluster> clusters =
            cluster_frontiers(frontier_cells, cfg.min_cluster_size, world.cell_size());
        // The size floor filters sensor noise; when only sub-floor slivers
        // remain (single-cell door pockets), they are the whole frontier.
        if (clusters.empty() && !frontier_cells.empty())
            clusters = cluster_frontiers(frontier_cells, 1, world.cell_size());
        tracker.assign(clusters);
        EnrichmentConfig ecfg{cfg.ablation == Ablation::NoEnrich ? 0 : cfg.j, cfg.d};
        enrich_frontiers(sg, clusters, ecfg, world);
        label_rooms(sg, labeler);

        update_visual_memory(mem, buffer, keywords, scorer, cfg.sampling_period);
        buffer.clear();

        const AgentState state = format_agent_state(sg);
        const std::string sg_json = serialize_scene_graph(sg);
        const PlannerInput input =
            build_planner_input(world.question(), sg_json, mem, current.snapshot, hist.rendered,
                                state.rendered, assets.system_prompt, cfg.ablation);
        const PlannerContext ctx{world, sg, mem, current.snapshot, cfg.ablation};

        // One re-prompt per invalid output, the validation error appended.
        PlannerOutput out;
        bool valid = false;
        std::string error;
        for (int attempt = 0; attempt <= cfg.planner_retries && !valid; ++attempt) {
            PlannerInput prompt = input;
            if (attempt > 0)
                prompt.history = "VALIDATION ERROR: " + error +
                                 (input.history.empty() ? "" : "\n" + input.history);
            try {
                const std::string raw = planner(prompt, ctx);
                out = validate_planner_output(raw, sg, int(world.question().choices.size()));
                valid = true;
            } catch (const NoFrontier&) {
                throw;  // unanswerable scenario, not a protocol failure
            } catch (const Error& e) {
                error = e.what();
            }
        }

        result.planning_steps = t_plan + 1;
        if (!valid) {
            result.termination_reason = TerminationReason::PlannerError;
            result.error = error;
            result.success = false;
            break;
        }

        StepRecord rec;
        rec.t = t_plan;
        rec.state = state.rendered;
        rec.answer = answer_letter(out.answer_index);
        rec.is_confident = out.is_confident;
        rec.confidence_level = out.confidence_level;
        rec.action = action_summary(out.action);
        for (const auto& f : sg.frontiers) rec.frontier_ids.push_back(f.id);
        rec.n_rooms = int(sg.rooms.size());
        rec.n_regions = int(sg.regions.size());
        rec.n_objects = int(sg.objects.size());
        rec.n_frontiers = int(sg.frontiers.size());
        rec.n_images = int(input.images.size());
        rec.traj_len_so_far = result.trajectory_length_m;
        result.transcript.push_back(rec);

        hist = update_history(hist, {t_plan, state.rendered, answer_letter(out.answer_index),
                                     out.is_confident, out.confidence_level,
                                     action_summary(out.action)});

        const TerminationDecision decision = check_termination(out, t_plan, cfg);
        if (decision.stop) {
            result.answer_index = out.answer_index;
            result.termination_reason = decision.reason;
            result.success = out.answer_index == world.question().correct_index &&
                             (decision.reason == TerminationReason::Confident ||
                              decision.reason == TerminationReason::Threshold);
            for (const auto& f : sg.frontiers)
                result.final_frontier_centroids.push_back(f.centroid);
            break;
        }

        ExecutionResult exec = execute_action(world, grid, sg, *out.action, cfg.camera, t_motion);
        t_motion += int(exec.observations.size());
        result.trajectory_length_m += exec.path_length_m;
        for (const auto& obs : exec.observations) {
            integrate_observation(grid, obs);
            update_scene_graph(sg, obs, grid, world);
            buffer.push_back(obs.snapshot);
        }
        result.path_taken.insert(result.path_taken.end(), exec.trajectory.begin(),
                                 exec.trajectory.end());
        current = exec.observations.back();
    }
    return result;
}

Metrics compute_metrics(const std::vector<EpisodeResult>& results) {
    Metrics m;
    m.n = int(results.size());
    if (m.n == 0) return m;
    int successes = 0;
    double steps = 0, length = 0;
    for (const auto& r : results) {
        if (!r.success) continue;
        ++successes;
        steps += r.planning_steps;
        length += r.trajectory_length_m;
    }
    m.success_rate_pct = 100.0 * double(successes) / double(m.n);
    if (successes > 0) {
        m.avg_planning_steps = steps / double(successes);
        m.avg_traj_len_m = length / double(successes);
    }
    return m;
}

}  // namespace eqa
