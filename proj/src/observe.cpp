#include "eqa/observe.hpp"

#include <algorithm>
#include <cmath>

#include "eqa/errors.hpp"

namespace eqa {

bool cell_visible(const World& w, const CellPose& pose, const CameraModel& cam, Cell target) {
    if (!w.in_bounds(target)) return false;
    if (target == pose.cell) return true;

    const int dx = target.x - pose.cell.x;
    const int dy = target.y - pose.cell.y;
    const double range_cells = cam.max_range_m / w.cell_size();
    if (double(dx) * dx + double(dy) * dy > range_cells * range_cells) return false;

    if (cam.fov_deg < 360.0) {
        const double bearing = std::atan2(double(dy), double(dx));
        const double half_fov = cam.fov_deg * M_PI / 360.0;
        if (std::fabs(wrap_angle(bearing - heading_angle(pose.heading))) > half_fov) return false;
    }

    const std::vector<Cell> line = bresenham_line(pose.cell, target);
    for (size_t i = 1; i + 1 < line.size(); ++i)
        if (w.occupancy(line[i]) == CellState::Occupied) return false;
    return true;
}

Observation render_observation(const World& w, const CellPose& pose, const CameraModel& cam,
                               int t) {
    if (!w.is_free(pose.cell)) throw Error("render_observation: pose not on a free cell");

    const int range = int(std::ceil(cam.max_range_m / w.cell_size()));
    const int x0 = std::max(0, pose.cell.x - range);
    const int x1 = std::min(w.width() - 1, pose.cell.x + range);
    const int y0 = std::max(0, pose.cell.y - range);
    const int y1 = std::min(w.height() - 1, pose.cell.y + range);
    const int bw = x1 - x0 + 1, bh = y1 - y0 + 1;

    std::vector<uint8_t> mask(size_t(bw) * bh, 0);
#pragma omp parallel for schedule(static)
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            if (cell_visible(w, pose, cam, {x, y}))
                mask[size_t(y - y0) * bw + (x - x0)] = 1;
        }
    }

    Observation obs;
    obs.t = t;
    obs.pose = pose;
    for (int x = x0; x <= x1; ++x)
        for (int y = y0; y <= y1; ++y)
            if (mask[size_t(y - y0) * bw + (x - x0)])
                obs.visible_cells.push_back({{x, y}, w.occupancy({x, y})});

    for (const auto& o : w.objects()) {
        if (o.cell.x < x0 || o.cell.x > x1 || o.cell.y < y0 || o.cell.y > y1) continue;
        if (mask[size_t(o.cell.y - y0) * bw + (o.cell.x - x0)])
            obs.visible_objects.push_back({o.id, o.label, o.cell});
    }
    std::sort(obs.visible_objects.begin(), obs.visible_objects.end(),
              [](const ObjectSighting& a, const ObjectSighting& b) { return a.id < b.id; });

    obs.snapshot.t = t;
    obs.snapshot.pose = pose;
    for (const auto& s : obs.visible_objects) obs.snapshot.labels.push_back(s.label);
    std::sort(obs.snapshot.labels.begin(), obs.snapshot.labels.end());
    obs.snapshot.hash = snapshot_hash(t, pose, obs.snapshot.labels);
    return obs;
}

uint64_t snapshot_hash(int t, const CellPose& pose, const std::vector<std::string>& labels) {
    // FNV-1a, pinned so hashes are stable across platforms and runs.
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* data, size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    mix(&t, sizeof(t));
    mix(&pose.cell.x, sizeof(pose.cell.x));
    mix(&pose.cell.y, sizeof(pose.cell.y));
    const uint8_t hd = uint8_t(pose.heading);
    mix(&hd, sizeof(hd));
    for (const auto& l : labels) {
        mix(l.data(), l.size());
        mix("|", 1);
    }
    return h;
}

std::string render_snapshot(const Snapshot& s) {
    std::string out = "step " + std::to_string(s.t) + " | pose (" + std::to_string(s.pose.cell.x) +
                      "," + std::to_string(s.pose.cell.y) + ") facing " +
                      heading_name(s.pose.heading) + " | visible:";
    if (s.labels.empty()) {
        out += " nothing";
    } else {
        for (size_t i = 0; i < s.labels.size(); ++i) out += (i ? ", " : " ") + s.labels[i];
    }
    return out;
}

}  // namespace eqa
