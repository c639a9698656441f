#include "eqa/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "eqa/errors.hpp"

namespace eqa {

int OccupancyGrid::count(Belief b) const {
    return int(std::count(state_.begin(), state_.end(), b));
}

void integrate_observation(OccupancyGrid& grid, const Observation& obs) {
    for (const auto& vc : obs.visible_cells)
        if (!grid.in_bounds(vc.cell))
            throw DimensionMismatch("integrate_observation: cell (" + std::to_string(vc.cell.x) +
                                    "," + std::to_string(vc.cell.y) + ") out of bounds");
    const auto& cells = obs.visible_cells;
#pragma omp parallel for schedule(static)
    for (size_t i = 0; i < cells.size(); ++i) {
        grid.set(cells[i].cell,
                 cells[i].state == CellState::Free ? Belief::Free : Belief::Occupied);
    }
}

std::vector<Cell> detect_frontier_cells(const OccupancyGrid& grid) {
    const int w = grid.width(), h = grid.height();
    std::vector<uint8_t> mask(size_t(w) * h, 0);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const Cell c{x, y};
            if (grid.at(c) != Belief::Free) continue;
            const Cell nbrs[4] = {{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}};
            for (const Cell& n : nbrs) {
                if (grid.in_bounds(n) && grid.at(n) == Belief::Unknown) {
                    mask[size_t(y) * w + x] = 1;
                    break;
                }
            }
        }
    }
    std::vector<Cell> out;
    for (int x = 0; x < w; ++x)
        for (int y = 0; y < h; ++y)
            if (mask[size_t(y) * w + x]) out.push_back({x, y});
    return out;
}

std::vector<FrontierCluster> cluster_frontiers(const std::vector<Cell>& cells,
                                               int min_cluster_size, double cell_size) {
    // Two-pass union-find over the sparse cell set, 8-connectivity.
    std::unordered_map<Cell, int, CellHash> index;
    index.reserve(cells.size());
    for (size_t i = 0; i < cells.size(); ++i) index[cells[i]] = int(i);

    std::vector<int> parent(cells.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };

    for (size_t i = 0; i < cells.size(); ++i) {
        const Cell c = cells[i];
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy) {
                if (dx == 0 && dy == 0) continue;
                auto it = index.find({c.x + dx, c.y + dy});
                if (it != index.end()) unite(int(i), it->second);
            }
    }

    std::unordered_map<int, std::vector<Cell>> comps;
    for (size_t i = 0; i < cells.size(); ++i) comps[find(int(i))].push_back(cells[i]);

    std::vector<FrontierCluster> out;
    for (auto& [root, members] : comps) {
        if (int(members.size()) < min_cluster_size) continue;
        FrontierCluster fc;
        std::sort(members.begin(), members.end());
        fc.cells = std::move(members);
        double sx = 0, sy = 0;
        for (const Cell& c : fc.cells) {
            const Vec2 p = cell_center(c, cell_size);
            sx += p.x;
            sy += p.y;
        }
        fc.centroid = {sx / double(fc.cells.size()), sy / double(fc.cells.size())};
        out.push_back(std::move(fc));
    }
    std::sort(out.begin(), out.end(), [](const FrontierCluster& a, const FrontierCluster& b) {
        return a.cells.front() < b.cells.front();
    });
    return out;
}

void FrontierTracker::assign(std::vector<FrontierCluster>& clusters) {
    // Global greedy match by squared distance; ties by (cluster order, id).
    struct Cand {
        double d2;
        size_t cluster;
        size_t prev;
    };
    std::vector<Cand> cands;
    for (size_t i = 0; i < clusters.size(); ++i)
        for (size_t j = 0; j < prev_.size(); ++j) {
            const double d2v = dist2(clusters[i].centroid, prev_[j].centroid);
            if (d2v <= 1.0) cands.push_back({d2v, i, j});
        }
    std::sort(cands.begin(), cands.end(), [this](const Cand& a, const Cand& b) {
        if (a.d2 != b.d2) return a.d2 < b.d2;
        if (a.cluster != b.cluster) return a.cluster < b.cluster;
        return prev_[a.prev].id < prev_[b.prev].id;
    });

    std::vector<uint8_t> cluster_done(clusters.size(), 0), prev_done(prev_.size(), 0);
    for (const Cand& c : cands) {
        if (cluster_done[c.cluster] || prev_done[c.prev]) continue;
        clusters[c.cluster].id = prev_[c.prev].id;
        cluster_done[c.cluster] = 1;
        prev_done[c.prev] = 1;
    }
    for (size_t i = 0; i < clusters.size(); ++i)
        if (!cluster_done[i]) clusters[i].id = "frontier_" + std::to_string(next_id_++);

    prev_.clear();
    for (const auto& fc : clusters) prev_.push_back({fc.id, fc.centroid});
}

std::string dump_grid(const OccupancyGrid& grid, const std::vector<Cell>& frontiers) {
    std::vector<std::string> rows(size_t(grid.height()));
    for (int y = 0; y < grid.height(); ++y) {
        std::string& row = rows[size_t(y)];
        row.resize(size_t(grid.width()));
        for (int x = 0; x < grid.width(); ++x) {
            switch (grid.at({x, y})) {
                case Belief::Free: row[size_t(x)] = '.'; break;
                case Belief::Occupied: row[size_t(x)] = '#'; break;
                case Belief::Unknown: row[size_t(x)] = '?'; break;
            }
        }
    }
    for (const Cell& c : frontiers)
        if (grid.in_bounds(c)) rows[size_t(c.y)][size_t(c.x)] = 'F';
    std::string out;
    for (const auto& r : rows) {
        out += r;
        out += '\n';
    }
    return out;
}

namespace {

// A* with Manhattan heuristic over `passable` cells; BFS in tests is the
// independent oracle.
template <class Passable>
std::vector<Cell> a_star(const OccupancyGrid& grid, Cell start, Cell goal, Passable passable) {
    const int w = grid.width(), h = grid.height();
    auto key = [w](Cell c) { return size_t(c.y) * w + c.x; };
    auto heur = [goal](Cell c) { return std::abs(c.x - goal.x) + std::abs(c.y - goal.y); };

    struct Node {
        int f, g;
        Cell cell;
    };
    auto worse = [](const Node& a, const Node& b) {
        if (a.f != b.f) return a.f > b.f;
        if (a.g != b.g) return a.g < b.g;  // prefer deeper nodes at equal f
        return b.cell < a.cell;
    };
    std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);
    std::vector<int> best_g(size_t(w) * h, INT32_MAX);
    std::vector<int32_t> came(size_t(w) * h, -1);

    best_g[key(start)] = 0;
    open.push({heur(start), 0, start});
    while (!open.empty()) {
        const Node n = open.top();
        open.pop();
        if (n.g > best_g[key(n.cell)]) continue;
        if (n.cell == goal) break;
        const Cell nbrs[4] = {{n.cell.x + 1, n.cell.y},
                              {n.cell.x - 1, n.cell.y},
                              {n.cell.x, n.cell.y + 1},
                              {n.cell.x, n.cell.y - 1}};
        for (const Cell& nb : nbrs) {
            if (!grid.in_bounds(nb) || !passable(nb)) continue;
            const int g2 = n.g + 1;
            if (g2 < best_g[key(nb)]) {
                best_g[key(nb)] = g2;
                came[key(nb)] = int32_t(key(n.cell));
                open.push({g2 + heur(nb), g2, nb});
            }
        }
    }

    if (best_g[key(goal)] == INT32_MAX)
        throw Unreachable("shortest_path: no path from (" + std::to_string(start.x) + "," +
                          std::to_string(start.y) + ") to (" + std::to_string(goal.x) + "," +
                          std::to_string(goal.y) + ")");

    std::vector<Cell> path;
    for (size_t k = key(goal); ; k = size_t(came[k])) {
        path.push_back({int(k % size_t(w)), int(k / size_t(w))});
        if (came[k] < 0) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

std::vector<Cell> shortest_path(const OccupancyGrid& grid, Cell start, Cell goal) {
    if (!grid.is_free(start)) throw Error("shortest_path: start is not Free");
    if (!grid.is_free(goal))
        throw Unreachable("shortest_path: goal (" + std::to_string(goal.x) + "," +
                          std::to_string(goal.y) + ") is not Free");
    if (start == goal) return {start};
    return a_star(grid, start, goal, [&grid](Cell c) { return grid.at(c) == Belief::Free; });
}

std::vector<Cell> optimistic_path(const OccupancyGrid& grid, Cell start, Cell goal) {
    if (!grid.is_free(start)) throw Error("optimistic_path: start is not Free");
    if (!grid.in_bounds(goal) || grid.at(goal) == Belief::Occupied)
        throw Unreachable("optimistic_path: goal is occupied or out of bounds");
    if (start == goal) return {start};
    return a_star(grid, start, goal, [&grid](Cell c) { return grid.at(c) != Belief::Occupied; });
}

namespace {

std::optional<Cell> nearest_among(const OccupancyGrid& grid, const Vec2& p,
                                  const std::vector<uint8_t>* reachable) {
    std::optional<Cell> best;
    double best_d2 = 0;
    for (int x = 0; x < grid.width(); ++x)
        for (int y = 0; y < grid.height(); ++y) {
            const Cell c{x, y};
            if (grid.at(c) != Belief::Free) continue;
            if (reachable && !(*reachable)[size_t(y) * grid.width() + x]) continue;
            const double d2v = dist2(cell_center(c, grid.cell_size()), p);
            if (!best || d2v < best_d2 || (d2v == best_d2 && c < *best)) {
                best = c;
                best_d2 = d2v;
            }
        }
    return best;
}

}  // namespace

std::optional<Cell> nearest_free_cell(const OccupancyGrid& grid, const Vec2& p) {
    return nearest_among(grid, p, nullptr);
}

std::optional<Cell> nearest_reachable_free_cell(const OccupancyGrid& grid, Cell from,
                                                const Vec2& p) {
    if (!grid.is_free(from)) return std::nullopt;
    std::vector<uint8_t> reach(size_t(grid.width()) * grid.height(), 0);
    std::vector<Cell> stack{from};
    reach[size_t(from.y) * grid.width() + from.x] = 1;
    while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        const Cell nbrs[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
        for (const Cell& n : nbrs) {
            if (!grid.is_free(n)) continue;
            uint8_t& r = reach[size_t(n.y) * grid.width() + n.x];
            if (!r) {
                r = 1;
                stack.push_back(n);
            }
        }
    }
    return nearest_among(grid, p, &reach);
}

}  // namespace eqa
