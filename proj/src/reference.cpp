#include "eqa/reference.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

namespace eqa::ref {

namespace {

// Independent Bresenham walk (deliberately not the one in geometry.cpp).
bool line_blocked(const World& w, Cell a, Cell b) {
    int x = a.x, y = a.y;
    const int dx = std::abs(b.x - a.x), sx = a.x < b.x ? 1 : -1;
    const int dy = -std::abs(b.y - a.y), sy = a.y < b.y ? 1 : -1;
    int err = dx + dy;
    bool first = true;
    while (!(x == b.x && y == b.y)) {
        if (!first && w.occupancy({x, y}) == CellState::Occupied) return true;
        first = false;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
    }
    return false;
}

}  // namespace

std::vector<VisibleCell> visible_cells_bruteforce(const World& w, const CellPose& pose,
                                                  const CameraModel& cam) {
    std::vector<VisibleCell> out;
    const double range_cells = cam.max_range_m / w.cell_size();
    const double heading = heading_angle(pose.heading);
    const double half_fov = cam.fov_deg * M_PI / 360.0;
    for (int x = 0; x < w.width(); ++x)
        for (int y = 0; y < w.height(); ++y) {
            const Cell c{x, y};
            if (c == pose.cell) {
                out.push_back({c, w.occupancy(c)});
                continue;
            }
            const int dx = c.x - pose.cell.x, dy = c.y - pose.cell.y;
            if (double(dx) * dx + double(dy) * dy > range_cells * range_cells) continue;
            if (cam.fov_deg < 360.0) {
                double diff = std::atan2(double(dy), double(dx)) - heading;
                while (diff > M_PI) diff -= 2.0 * M_PI;
                while (diff <= -M_PI) diff += 2.0 * M_PI;
                if (std::fabs(diff) > half_fov) continue;
            }
            if (line_blocked(w, pose.cell, c)) continue;
            out.push_back({c, w.occupancy(c)});
        }
    std::sort(out.begin(), out.end(),
              [](const VisibleCell& a, const VisibleCell& b) { return a.cell < b.cell; });
    return out;
}

std::vector<Cell> detect_frontier_cells_bruteforce(const OccupancyGrid& grid) {
    std::vector<Cell> out;
    for (int x = 0; x < grid.width(); ++x)
        for (int y = 0; y < grid.height(); ++y) {
            if (grid.at({x, y}) != Belief::Free) continue;
            bool frontier = false;
            const Cell nbrs[4] = {{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}};
            for (const Cell& n : nbrs)
                if (grid.in_bounds(n) && grid.at(n) == Belief::Unknown) frontier = true;
            if (frontier) out.push_back({x, y});
        }
    return out;
}

void integrate_observation_serial(OccupancyGrid& grid, const Observation& obs) {
    for (const auto& vc : obs.visible_cells)
        grid.set(vc.cell, vc.state == CellState::Free ? Belief::Free : Belief::Occupied);
}

std::vector<FrontierCluster> cluster_frontiers_floodfill(const std::vector<Cell>& cells,
                                                         int min_cluster_size, double cell_size) {
    std::set<Cell> todo(cells.begin(), cells.end());
    std::vector<FrontierCluster> out;
    while (!todo.empty()) {
        std::deque<Cell> queue{*todo.begin()};
        todo.erase(todo.begin());
        std::vector<Cell> members;
        while (!queue.empty()) {
            const Cell c = queue.front();
            queue.pop_front();
            members.push_back(c);
            for (int dx = -1; dx <= 1; ++dx)
                for (int dy = -1; dy <= 1; ++dy) {
                    const Cell n{c.x + dx, c.y + dy};
                    auto it = todo.find(n);
                    if (it != todo.end()) {
                        todo.erase(it);
                        queue.push_back(n);
                    }
                }
        }
        if (int(members.size()) < min_cluster_size) continue;
        std::sort(members.begin(), members.end());
        FrontierCluster fc;
        fc.cells = std::move(members);
        double sx = 0, sy = 0;
        for (const Cell& c : fc.cells) {
            sx += (c.x + 0.5) * cell_size;
            sy += (c.y + 0.5) * cell_size;
        }
        fc.centroid = {sx / double(fc.cells.size()), sy / double(fc.cells.size())};
        out.push_back(std::move(fc));
    }
    std::sort(out.begin(), out.end(), [](const FrontierCluster& a, const FrontierCluster& b) {
        return a.cells.front() < b.cells.front();
    });
    return out;
}

std::optional<int> bfs_path_cells(const OccupancyGrid& grid, Cell start, Cell goal) {
    if (!grid.is_free(start) || !grid.is_free(goal)) return std::nullopt;
    std::map<Cell, int> dist;
    dist[start] = 1;  // cell count including start
    std::deque<Cell> queue{start};
    while (!queue.empty()) {
        const Cell c = queue.front();
        queue.pop_front();
        if (c == goal) return dist[c];
        const Cell nbrs[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
        for (const Cell& n : nbrs) {
            if (!grid.is_free(n) || dist.count(n)) continue;
            dist[n] = dist[c] + 1;
            queue.push_back(n);
        }
    }
    return std::nullopt;
}

}  // namespace eqa::ref
