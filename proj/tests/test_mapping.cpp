#include <doctest.h>

#include <algorithm>
#include <set>

#include "eqa/errors.hpp"
#include "eqa/reference.hpp"
#include "eqa/rng.hpp"
#include "eqa/worldgen.hpp"
#include "helpers.hpp"

using namespace eqa;

namespace {

OccupancyGrid random_grid(Rng& rng, int w, int h) {
    OccupancyGrid grid(w, h, 0.25);
    for (int x = 0; x < w; ++x)
        for (int y = 0; y < h; ++y) grid.set({x, y}, Belief(rng.uniform_int(0, 2)));
    return grid;
}

}  // namespace

TEST_CASE("integrate_observation writes exactly the visible cells") {
    const World w = test::world_from_rows({"....", "....", "....", "...."});
    OccupancyGrid grid(10, 10, 0.25);
    Observation obs;
    obs.pose = {{0, 0}, Heading::E};
    obs.visible_cells = {{{0, 0}, CellState::Free},
                         {{1, 0}, CellState::Free},
                         {{2, 0}, CellState::Free},
                         {{3, 0}, CellState::Free}};
    integrate_observation(grid, obs);
    CHECK(grid.count(Belief::Free) == 4);
    CHECK(grid.unknown_count() == 96);
}

TEST_CASE("integrating the same observation twice equals integrating once") {
    const World w = generate_world(0);
    CameraModel cam;
    const Observation obs = render_observation(w, w.agent_spawn(), cam);
    OccupancyGrid once(w.width(), w.height(), w.cell_size());
    integrate_observation(once, obs);
    OccupancyGrid twice = once;
    integrate_observation(twice, obs);
    CHECK(once == twice);
}

TEST_CASE("integrate_observation rejects out-of-bounds cells") {
    OccupancyGrid grid(4, 4, 0.25);
    Observation obs;
    obs.visible_cells = {{{7, 7}, CellState::Free}};
    CHECK_THROWS_AS(integrate_observation(grid, obs), DimensionMismatch);
}

TEST_CASE("a full pose sweep reconstructs the ground truth") {
    const World w = generate_world(4);
    OccupancyGrid grid(w.width(), w.height(), w.cell_size());
    CameraModel cam;
    cam.fov_deg = 360.0;
    for (int x = 0; x < w.width(); ++x)
        for (int y = 0; y < w.height(); ++y)
            if (w.is_free({x, y}))
                integrate_observation(grid, render_observation(w, {{x, y}, Heading::N}, cam));
    // Every free cell and its occupied boundary have been observed.
    for (int x = 0; x < w.width(); ++x)
        for (int y = 0; y < w.height(); ++y) {
            const Cell c{x, y};
            if (w.is_free(c)) {
                CHECK(grid.at(c) == Belief::Free);
            } else {
                bool touches_free = false;
                for (const Cell n : {Cell{x + 1, y}, Cell{x - 1, y}, Cell{x, y + 1}, Cell{x, y - 1}})
                    if (w.is_free(n)) touches_free = true;
                if (touches_free) CHECK(grid.at(c) == Belief::Occupied);
            }
        }
}

TEST_CASE("frontiers: all-Unknown grid has none") {
    OccupancyGrid grid(6, 6, 0.25);
    CHECK(detect_frontier_cells(grid).empty());
}

TEST_CASE("frontiers: a lone Free cell surrounded by Unknown is one") {
    OccupancyGrid grid(5, 5, 0.25);
    grid.set({2, 2}, Belief::Free);
    const auto cells = detect_frontier_cells(grid);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0] == Cell{2, 2});
}

TEST_CASE("frontier detection matches the brute-force scan on random grids") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const OccupancyGrid grid = random_grid(rng, rng.uniform_int(1, 40), rng.uniform_int(1, 40));
        auto got = detect_frontier_cells(grid);
        auto expected = ref::detect_frontier_cells_bruteforce(grid);
        std::sort(expected.begin(), expected.end());
        CHECK(got == expected);
    }
}

TEST_CASE("frontier cells are Free with an Unknown 4-neighbor") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const OccupancyGrid grid = random_grid(rng, 24, 24);
        for (const Cell& c : detect_frontier_cells(grid)) {
            CHECK(grid.at(c) == Belief::Free);
            bool has_unknown = false;
            for (const Cell n : {Cell{c.x + 1, c.y}, Cell{c.x - 1, c.y}, Cell{c.x, c.y + 1},
                                 Cell{c.x, c.y - 1}})
                if (grid.in_bounds(n) && grid.at(n) == Belief::Unknown) has_unknown = true;
            CHECK(has_unknown);
        }
    }
}

TEST_CASE("clustering: empty input, symmetric run, split runs") {
    CHECK(cluster_frontiers({}, 1, 0.25).empty());

    const std::vector<Cell> run = {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}};
    const auto clusters = cluster_frontiers(run, 3, 0.25);
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0].cells.size() == 5);
    const Vec2 center = cell_center({0, 2}, 0.25);
    CHECK(clusters[0].centroid.x == doctest::Approx(center.x));
    CHECK(clusters[0].centroid.y == doctest::Approx(center.y));

    // (2,0) missing: two 8-connected components.
    const std::vector<Cell> split = {{0, 0}, {1, 0}, {4, 0}, {5, 0}};
    CHECK(cluster_frontiers(split, 1, 0.25).size() == 2);
}

TEST_CASE("clustering matches the flood-fill reference and partitions the input") {
    Rng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Cell> cells;
        std::set<Cell> used;
        const int n = rng.uniform_int(0, 60);
        for (int i = 0; i < n; ++i) {
            const Cell c{rng.uniform_int(0, 15), rng.uniform_int(0, 15)};
            if (used.insert(c).second) cells.push_back(c);
        }
        const int min_size = rng.uniform_int(1, 3);
        const auto got = cluster_frontiers(cells, min_size, 0.25);
        const auto expected = ref::cluster_frontiers_floodfill(cells, min_size, 0.25);
        REQUIRE(got.size() == expected.size());
        for (size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].cells == expected[i].cells);
            CHECK(got[i].centroid.x == doctest::Approx(expected[i].centroid.x));
            CHECK(got[i].centroid.y == doctest::Approx(expected[i].centroid.y));
        }

        // Output cells partition the input cells kept by the size floor.
        std::set<Cell> out_cells;
        size_t total = 0;
        for (const auto& fc : got) {
            total += fc.cells.size();
            out_cells.insert(fc.cells.begin(), fc.cells.end());
        }
        CHECK(out_cells.size() == total);
        std::set<Cell> expected_cells;
        for (const auto& fc : expected) expected_cells.insert(fc.cells.begin(), fc.cells.end());
        CHECK(out_cells == expected_cells);
    }
}

TEST_CASE("frontier tracker keeps ids stable within 1 m") {
    FrontierTracker tracker;
    std::vector<FrontierCluster> step1 = {{"", {{0, 0}, {0, 1}}, {0.125, 0.25}},
                                          {"", {{8, 0}, {8, 1}}, {2.125, 0.25}}};
    tracker.assign(step1);
    CHECK(step1[0].id == "frontier_0");
    CHECK(step1[1].id == "frontier_1");

    // Centroids drift slightly: ids persist. A far-away newcomer gets a new id.
    std::vector<FrontierCluster> step2 = {{"", {{0, 1}, {0, 2}}, {0.125, 0.5}},
                                          {"", {{8, 1}, {8, 2}}, {2.125, 0.5}},
                                          {"", {{20, 20}}, {5.125, 5.125}}};
    tracker.assign(step2);
    CHECK(step2[0].id == "frontier_0");
    CHECK(step2[1].id == "frontier_1");
    CHECK(step2[2].id == "frontier_2");
}

TEST_CASE("shortest_path handles the degenerate and blocked cases") {
    const auto grid = test::grid_from_rows({".....", ".....", ".....", ".....", "....."});
    CHECK(shortest_path(grid, {2, 2}, {2, 2}) == std::vector<Cell>{{2, 2}});
    CHECK(shortest_path(grid, {0, 0}, {4, 4}).size() == 9);

    auto blocked = test::grid_from_rows({"..#..", "..#..", "..#..", "..#..", "..#.."});
    CHECK_THROWS_AS(shortest_path(blocked, {0, 0}, {4, 0}), Unreachable);
    CHECK_THROWS_AS(shortest_path(blocked, {0, 0}, {2, 0}), Unreachable);  // goal occupied
}

TEST_CASE("shortest_path matches BFS length on random solvable instances") {
    Rng rng(17);
    int solved = 0;
    while (solved < 200) {
        OccupancyGrid grid(20, 20, 0.25);
        for (int x = 0; x < 20; ++x)
            for (int y = 0; y < 20; ++y)
                grid.set({x, y}, rng.uniform01() < 0.3 ? Belief::Occupied : Belief::Free);
        const Cell start{rng.uniform_int(0, 19), rng.uniform_int(0, 19)};
        const Cell goal{rng.uniform_int(0, 19), rng.uniform_int(0, 19)};
        if (!grid.is_free(start) || !grid.is_free(goal)) continue;
        const auto expected = ref::bfs_path_cells(grid, start, goal);
        if (!expected) continue;
        ++solved;
        const auto path = shortest_path(grid, start, goal);
        CHECK(int(path.size()) == *expected);
        CHECK(path.front() == start);
        CHECK(path.back() == goal);
        for (size_t i = 0; i < path.size(); ++i) {
            CHECK(grid.is_free(path[i]));
            if (i > 0)
                CHECK(std::abs(path[i].x - path[i - 1].x) + std::abs(path[i].y - path[i - 1].y) ==
                      1);
        }
    }
}

TEST_CASE("grid debug dump renders states and frontier overlay") {
    auto grid = test::grid_from_rows({"..#", "?..", "???"});
    const auto frontiers = detect_frontier_cells(grid);
    const std::string dump = dump_grid(grid, frontiers);
    CHECK(dump == "F.#\n?FF\n???\n");
}
