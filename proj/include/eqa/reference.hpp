#pragma once

#include <optional>
#include <vector>

#include "eqa/grid.hpp"
#include "eqa/observe.hpp"

// Serial reference implementations of the grid kernels. Kept as an
// independent code path: tests compare the production kernels against these,
// and the benchmark target measures both. Do not share helpers with src/.
namespace eqa::ref {

// Exhaustive all-cell scan applying the pinned visibility semantics.
std::vector<VisibleCell> visible_cells_bruteforce(const World& w, const CellPose& pose,
                                                  const CameraModel& cam);

// Serial all-cell frontier scan.
std::vector<Cell> detect_frontier_cells_bruteforce(const OccupancyGrid& grid);

// Serial per-cell integration loop.
void integrate_observation_serial(OccupancyGrid& grid, const Observation& obs);

// BFS flood-fill clustering, 8-connectivity.
std::vector<FrontierCluster> cluster_frontiers_floodfill(const std::vector<Cell>& cells,
                                                         int min_cluster_size, double cell_size);

// Plain BFS; path length in cells (start counts), or nullopt when unreachable.
std::optional<int> bfs_path_cells(const OccupancyGrid& grid, Cell start, Cell goal);

}  // namespace eqa::ref
