#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eqa/observe.hpp"

namespace eqa {

enum class Belief : uint8_t { Free, Occupied, Unknown };

// The agent's 2D occupancy belief. Starts all-Unknown; integrations only ever
// replace Unknown with observed states, so the Unknown count is non-increasing.
class OccupancyGrid {
  public:
    OccupancyGrid(int width, int height, double cell_size)
        : width_(width), height_(height), cell_size_(cell_size),
          state_(size_t(width) * height, Belief::Unknown) {}

    int width() const { return width_; }
    int height() const { return height_; }
    double cell_size() const { return cell_size_; }

    bool in_bounds(Cell c) const {
        return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
    }
    Belief at(Cell c) const { return state_[idx(c)]; }
    void set(Cell c, Belief b) { state_[idx(c)] = b; }
    bool is_free(Cell c) const { return in_bounds(c) && at(c) == Belief::Free; }

    int count(Belief b) const;
    int unknown_count() const { return count(Belief::Unknown); }

    friend bool operator==(const OccupancyGrid& a, const OccupancyGrid& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.state_ == b.state_;
    }

  private:
    size_t idx(Cell c) const { return size_t(c.y) * width_ + c.x; }

    int width_, height_;
    double cell_size_;
    std::vector<Belief> state_;
};

// Writes each visible cell's observed state; other cells untouched. Idempotent
// for identical observations. Throws DimensionMismatch on out-of-bounds cells.
void integrate_observation(OccupancyGrid& grid, const Observation& obs);

// Free cells with at least one Unknown 4-neighbor, sorted by cell order.
std::vector<Cell> detect_frontier_cells(const OccupancyGrid& grid);

struct FrontierCluster {
    std::string id;           // assigned by FrontierTracker; empty until then
    std::vector<Cell> cells;  // sorted; 8-connected within the cluster
    Vec2 centroid;            // meters, arithmetic mean of member cell centers
};

// 8-connected components of `cells` with size >= min_cluster_size, ordered by
// their lexicographically smallest member cell.
std::vector<FrontierCluster> cluster_frontiers(const std::vector<Cell>& cells,
                                               int min_cluster_size, double cell_size);

// Keeps frontier ids stable across planning steps: a cluster inherits the id
// of the nearest previous-step cluster within 1 m (greedy by distance), and
// gets a fresh "frontier_<n>" otherwise.
class FrontierTracker {
  public:
    void assign(std::vector<FrontierCluster>& clusters);

  private:
    struct Prev {
        std::string id;
        Vec2 centroid;
    };
    std::vector<Prev> prev_;
    int next_id_ = 0;
};

// '.' Free / '#' Occupied / '?' Unknown, 'F' overlaid on frontier cells.
std::string dump_grid(const OccupancyGrid& grid, const std::vector<Cell>& frontiers = {});

// 4-connected shortest path over Free cells, minimal in cell count; [start]
// when start == goal. Throws Unreachable when the goal is not Free or cut off.
std::vector<Cell> shortest_path(const OccupancyGrid& grid, Cell start, Cell goal);

// Shortest path treating Unknown as traversable (never through known walls).
// Used to approach belief regions that are only diagonally connected yet.
std::vector<Cell> optimistic_path(const OccupancyGrid& grid, Cell start, Cell goal);

// Free cell nearest to `p` (squared center distance, ties by cell order).
std::optional<Cell> nearest_free_cell(const OccupancyGrid& grid, const Vec2& p);

// Same, restricted to cells 4-reachable from `from` over Free cells.
std::optional<Cell> nearest_reachable_free_cell(const OccupancyGrid& grid, Cell from,
                                                const Vec2& p);

}  // namespace eqa
