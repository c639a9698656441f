#pragma once

#include <string>
#include <vector>

#include "eqa/world.hpp"

namespace eqa {

struct CameraModel {
    double fov_deg = 120.0;
    double max_range_m = 5.0;
};

// Structured stand-in for a camera image: what was visible from where.
struct Snapshot {
    int t = 0;
    CellPose pose;
    std::vector<std::string> labels;  // visible object labels, sorted
    uint64_t hash = 0;

    friend bool operator==(const Snapshot& a, const Snapshot& b) {
        return a.t == b.t && a.pose == b.pose && a.labels == b.labels && a.hash == b.hash;
    }
};

struct VisibleCell {
    Cell cell;
    CellState state;
};

struct ObjectSighting {
    std::string id;
    std::string label;
    Cell cell;
};

struct Observation {
    int t = 0;
    CellPose pose;
    std::vector<VisibleCell> visible_cells;      // sorted by cell order
    std::vector<ObjectSighting> visible_objects;  // sorted by object id
    Snapshot snapshot;
};

// Visibility predicate, the pinned sensor semantics:
//   - the pose's own cell is always visible;
//   - center-to-center distance <= max_range (squared integer cell distance
//     against (max_range_m / cell_size)^2);
//   - bearing within fov/2 of the heading (atan2 on integer deltas); a fov of
//     360 or more disables the wedge test;
//   - every intermediate cell of the Bresenham line from the pose to the
//     target is not Occupied (the target itself may be an occupied wall).
bool cell_visible(const World& w, const CellPose& pose, const CameraModel& cam, Cell target);

// Ray-cast view from a pose. Pure; parallelized over the candidate window.
Observation render_observation(const World& w, const CellPose& pose, const CameraModel& cam,
                               int t = 0);

uint64_t snapshot_hash(int t, const CellPose& pose, const std::vector<std::string>& labels);

// "step <t> | pose (<x>,<y>) facing <H> | visible: a, b, c" — the textual
// rendering that stands in for image bytes on the wire.
std::string render_snapshot(const Snapshot& s);

}  // namespace eqa
