#include <doctest.h>

#include <algorithm>
#include <memory>

#include "eqa/assets.hpp"
#include "eqa/batch.hpp"
#include "eqa/errors.hpp"
#include "eqa/reference.hpp"
#include "eqa/rng.hpp"
#include "eqa/scripted_planner.hpp"
#include "helpers.hpp"

using namespace eqa;

namespace {

PlannerFn scripted_planner_fn(uint64_t seed) {
    auto planner = std::make_shared<ScriptedPlanner>(seed, Assets::get().stopwords);
    return [planner](const PlannerInput& input, const PlannerContext& ctx) {
        return planner->plan(input, ctx.world, ctx.sg, ctx.mem, ctx.current_view, ctx.ablation);
    };
}

// Two-row corridor, agent at the west end looking east. The couch sits
// within camera range (near) or beyond it (far).
World corridor_world(Cell couch_cell) {
    World w = test::world_from_rows({
        "##############################",
        "#............................#",
        "#............................#",
        "##############################",
    });
    w.add_object({"object_0", "couch", couch_cell, {}});
    w.set_agent_spawn({{1, 1}, Heading::E});
    Question q;
    q.text = "Is there a couch in the living room?";
    q.choices = {"Yes", "No"};
    q.correct_index = 0;
    q.target_object_ids = {"object_0"};
    w.set_question(q);
    return w;
}

World near_corridor_world() { return corridor_world({8, 1}); }
World far_corridor_world() { return corridor_world({27, 1}); }

}  // namespace

TEST_CASE("check_termination implements the strict threshold rule") {
    EpisodeConfig cfg;  // threshold 0.9, t_max 10
    PlannerOutput out;

    out.is_confident = true;
    out.confidence_level = 0.2;
    auto d = check_termination(out, 0, cfg);
    CHECK(d.stop);
    CHECK(d.reason == TerminationReason::Confident);

    out.is_confident = false;
    out.confidence_level = 0.91;
    d = check_termination(out, 0, cfg);
    CHECK(d.stop);
    CHECK(d.reason == TerminationReason::Threshold);

    out.confidence_level = 0.90;
    d = check_termination(out, 0, cfg);
    CHECK_FALSE(d.stop);

    out.confidence_level = 0.1;
    d = check_termination(out, 10, cfg);
    CHECK(d.stop);
    CHECK(d.reason == TerminationReason::MaxSteps);
}

TEST_CASE("execute_action walks to the adjacent free cell facing the object") {
    const World w = near_corridor_world();
    OccupancyGrid grid(w.width(), w.height(), w.cell_size());
    CameraModel cam;
    cam.fov_deg = 360.0;
    const Observation obs = render_observation(w, {{7, 1}, Heading::E}, cam, 0);
    integrate_observation(grid, obs);
    SceneGraph sg;
    update_scene_graph(sg, obs, grid, w);

    Action a;
    a.kind = Action::Kind::GotoObjectNode;
    a.object_id = "object_0";
    a.region_id = sg.find_object("object_0")->region_id;
    a.room_id = sg.find_region(a.region_id)->room_id;

    const ExecutionResult exec = execute_action(w, grid, sg, a, cam, 1);
    // The object's own cell is free, one move east; camera faces it en route.
    CHECK(exec.path_length_m == doctest::Approx(0.25));
    REQUIRE(exec.trajectory.size() == 2);
    CHECK(exec.trajectory[0].cell == Cell{7, 1});
    CHECK(exec.trajectory[0].heading == Heading::E);
    CHECK(exec.trajectory[1].cell == Cell{8, 1});
    CHECK(exec.observations.size() == 2);
    CHECK(exec.observations[0].t == 1);
    CHECK(exec.observations[1].t == 2);
}

TEST_CASE("execute_action length equals the BFS oracle times cell size") {
    const World w = near_corridor_world();
    OccupancyGrid grid(w.width(), w.height(), w.cell_size());
    CameraModel cam;
    cam.fov_deg = 360.0;
    cam.max_range_m = 5.0;
    const Observation obs = render_observation(w, w.agent_spawn(), cam, 0);
    integrate_observation(grid, obs);
    SceneGraph sg;
    update_scene_graph(sg, obs, grid, w);

    Action a;
    a.kind = Action::Kind::GotoObjectNode;
    a.object_id = "object_0";
    const ExecutionResult exec = execute_action(w, grid, sg, a, cam, 1);
    const auto bfs = ref::bfs_path_cells(grid, {1, 1}, {8, 1});
    REQUIRE(bfs);
    CHECK(exec.path_length_m == doctest::Approx((*bfs - 1) * 0.25));
}

TEST_CASE("frontier targets with non-free centroid cells route to the nearest free cell") {
    const World w = near_corridor_world();
    OccupancyGrid grid(w.width(), w.height(), w.cell_size());
    CameraModel cam;
    cam.max_range_m = 1.0;
    cam.fov_deg = 360.0;
    const Observation obs = render_observation(w, w.agent_spawn(), cam, 0);
    integrate_observation(grid, obs);
    SceneGraph sg;
    update_scene_graph(sg, obs, grid, w);

    // Centroid inside unknown space east of the explored pocket.
    FrontierNode f;
    f.id = "frontier_0";
    f.room_id = "room_0";
    f.centroid = {2.0, 0.375};
    sg.frontiers = {f};

    Action a;
    a.kind = Action::Kind::GotoFrontierNode;
    a.frontier_id = "frontier_0";
    const ExecutionResult exec = execute_action(w, grid, sg, a, cam, 1);
    const Cell final_cell = exec.trajectory.back().cell;
    CHECK(grid.is_free(final_cell));
    // Nearest belief-free cell to the centroid (the eastmost explored cell).
    const auto nearest = nearest_free_cell(grid, f.centroid);
    REQUIRE(nearest);
    CHECK(final_cell == *nearest);
}

TEST_CASE("stale action nodes are rejected") {
    const World w = near_corridor_world();
    OccupancyGrid grid(w.width(), w.height(), w.cell_size());
    CameraModel cam;
    const Observation obs = render_observation(w, w.agent_spawn(), cam, 0);
    integrate_observation(grid, obs);
    SceneGraph sg;
    update_scene_graph(sg, obs, grid, w);
    Action a;
    a.kind = Action::Kind::GotoObjectNode;
    a.object_id = "object_9";
    CHECK_THROWS_AS(execute_action(w, grid, sg, a, cam, 1), StaleNode);
}

TEST_CASE("an episode with the target in view succeeds in one step") {
    const World w = near_corridor_world();  // couch visible down the corridor
    EpisodeConfig cfg;
    const EpisodeResult r = run_episode(w, scripted_planner_fn(0), cfg);
    CHECK(r.success);
    CHECK(r.planning_steps == 1);
    CHECK(r.answer_index == 0);
    CHECK(r.termination_reason == TerminationReason::Confident);
    CHECK(r.trajectory_length_m == 0.0);
}

TEST_CASE("T_max = 0 forces a stop after exactly one planning step") {
    const World w = far_corridor_world();  // couch beyond camera range
    EpisodeConfig cfg;
    cfg.t_max = 0;
    const EpisodeResult r = run_episode(w, scripted_planner_fn(0), cfg);
    CHECK(r.planning_steps == 1);
    CHECK(r.termination_reason == TerminationReason::MaxSteps);
    CHECK_FALSE(r.success);
}

TEST_CASE("planner errors abort after one re-prompt") {
    const World w = near_corridor_world();
    int calls = 0;
    std::string last_history;
    const PlannerFn bad = [&](const PlannerInput& in, const PlannerContext&) {
        ++calls;
        last_history = in.history;
        return std::string("{\"answer\": \"Z\"}");
    };
    EpisodeConfig cfg;
    const EpisodeResult r = run_episode(w, bad, cfg);
    CHECK(calls == 2);  // original + one re-prompt
    CHECK(last_history.rfind("VALIDATION ERROR: ", 0) == 0);
    CHECK(r.termination_reason == TerminationReason::PlannerError);
    CHECK_FALSE(r.success);
    CHECK_FALSE(r.error.empty());
}

TEST_CASE("an unanswerable scenario surfaces as NoFrontier once explored") {
    World w = near_corridor_world();
    Question q = w.question();
    q.target_object_ids = {"object_9"};  // nothing in the world answers it
    w.set_question(q);
    EpisodeConfig cfg;
    cfg.t_max = 50;
    CHECK_THROWS_AS(run_episode(w, scripted_planner_fn(0), cfg), NoFrontier);
}

TEST_CASE("oracle episodes on generated worlds succeed and stay consistent") {
    for (uint64_t seed = 0; seed < 6; ++seed) {
        const World w = generate_world(seed);
        EpisodeConfig cfg;
        cfg.seed = seed;

        // Wrap the planner to check the live graph and belief map invariants
        // at every planning step.
        auto planner = std::make_shared<ScriptedPlanner>(seed, Assets::get().stopwords);
        int last_unknown = w.width() * w.height();
        const PlannerFn checked = [&, planner](const PlannerInput& input,
                                               const PlannerContext& ctx) {
            CHECK(validate_scene_graph(ctx.sg).empty());
            const std::string json = serialize_scene_graph(ctx.sg);
            CHECK(serialize_scene_graph(parse_scene_graph(json)) == json);
            return planner->plan(input, ctx.world, ctx.sg, ctx.mem, ctx.current_view,
                                 ctx.ablation);
        };

        const EpisodeResult r = run_episode(w, checked, cfg);
        CHECK_MESSAGE(r.success, "seed ", seed, " failed: ", r.error);
        CHECK(r.planning_steps <= cfg.t_max);
        CHECK(r.planning_steps <= cfg.t_max + 1);

        // Motion trajectory length matches the step-count law.
        int moves = 0;
        for (size_t i = 1; i < r.path_taken.size(); ++i)
            if (!(r.path_taken[i].cell == r.path_taken[i - 1].cell)) ++moves;
        // path_taken holds per-action trajectories whose first pose repeats
        // the previous end cell, so cell changes count the executed moves.
        CHECK(r.trajectory_length_m == doctest::Approx(moves * w.cell_size()));
        (void)last_unknown;
    }
}

TEST_CASE("unknown-cell count never increases over an episode") {
    const World w = generate_world(3);
    EpisodeConfig cfg;
    auto planner = std::make_shared<ScriptedPlanner>(0, Assets::get().stopwords);
    int last_unknown = w.width() * w.height() + 1;
    bool monotone = true;
    const PlannerFn watched = [&, planner](const PlannerInput& input, const PlannerContext& ctx) {
        // The belief map is not exposed by PlannerContext; infer coverage
        // monotonicity from the graph's explored region cells instead.
        int explored = 0;
        for (const auto& region : ctx.sg.regions) explored += int(region.cells.size());
        const int unknown_bound = w.width() * w.height() - explored;
        if (unknown_bound > last_unknown) monotone = false;
        last_unknown = unknown_bound;
        return planner->plan(input, ctx.world, ctx.sg, ctx.mem, ctx.current_view, ctx.ablation);
    };
    run_episode(w, watched, cfg);
    CHECK(monotone);
}

TEST_CASE("vis-only episodes pick frontiers from the seeded generator") {
    const World w = generate_world(8);
    EpisodeConfig cfg;
    cfg.ablation = Ablation::VisOnly;
    cfg.seed = 8;
    cfg.t_max = 6;
    const EpisodeResult r = run_episode(w, scripted_planner_fn(cfg.seed), cfg);

    Rng replay(cfg.seed);
    for (const auto& rec : r.transcript) {
        if (rec.action.rfind("Goto_frontier_node_step(", 0) != 0) continue;
        REQUIRE_FALSE(rec.frontier_ids.empty());
        const size_t expected = size_t(replay.uniform_int(0, int(rec.frontier_ids.size()) - 1));
        CHECK(rec.action == "Goto_frontier_node_step(" + rec.frontier_ids[expected] + ")");
    }
}

TEST_CASE("compute_metrics follows the definitions") {
    CHECK(compute_metrics({}).n == 0);
    CHECK(compute_metrics({}).success_rate_pct == 0.0);
    CHECK_FALSE(compute_metrics({}).avg_planning_steps);

    EpisodeResult success;
    success.success = true;
    success.planning_steps = 2;
    success.trajectory_length_m = 4.0;
    EpisodeResult failure;
    failure.success = false;
    failure.planning_steps = 9;
    failure.trajectory_length_m = 22.0;

    const Metrics m = compute_metrics({success, failure});
    CHECK(m.n == 2);
    CHECK(m.success_rate_pct == 50.0);
    CHECK(*m.avg_planning_steps == 2.0);
    CHECK(*m.avg_traj_len_m == 4.0);

    EpisodeResult s2 = success;
    s2.planning_steps = 4;
    const Metrics m2 = compute_metrics({success, s2});
    CHECK(*m2.avg_planning_steps == 3.0);
}

TEST_CASE("step records serialize with the pinned field set") {
    StepRecord rec;
    rec.t = 2;
    rec.state = "X";
    rec.action = "none";
    rec.answer = "A";
    rec.confidence_level = 0.25;
    rec.frontier_ids = {"frontier_1"};
    rec.n_rooms = 1;
    rec.n_images = 3;
    rec.traj_len_so_far = 1.5;
    const std::string json = step_record_json(rec);
    CHECK(json ==
          "{\"t\":2,\"state\":\"X\",\"action\":\"none\",\"answer\":\"A\",\"is_confident\":false,"
          "\"confidence_level\":0.25,\"frontier_ids\":[\"frontier_1\"],\"node_counts\":{\"rooms\":"
          "1,\"regions\":0,\"objects\":0,\"frontiers\":0},\"n_images\":3,\"traj_len_so_far\":1.5}");
}
