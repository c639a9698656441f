#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eqa/grid.hpp"
#include "eqa/observe.hpp"
#include "eqa/world.hpp"

namespace eqa {

// Layers: building (5) > rooms (4) > regions + frontiers (3) > objects +
// agent (2). Belonging edges are stored structurally (child keeps its parent
// id); traversability and proximity edges are explicit lists.

struct RoomNode {
    std::string id;
    std::string name = "unknown room";
    int world_index = -1;       // index into World::rooms()
    std::string labeled_sig;    // object-label signature at last labeling
};

struct RegionNode {
    std::string id;
    std::string room_id;      // Belonging
    std::vector<Cell> cells;  // explored free cells, sorted
};

struct FrontierNode {
    std::string id;
    std::string room_id;  // Belonging
    Vec2 centroid;        // quantized to 3 decimals
    std::vector<Cell> cells;
    std::vector<std::string> nearby_objects;  // Proximity edges, nearest first
};

struct ObjectNode {
    std::string id;  // world object id
    std::string label;
    Vec2 pos;  // cell center, quantized
    Cell cell;
    std::string region_id;  // Belonging
};

struct AgentNode {
    std::string id;  // "agent_<t>"
    Vec2 pos;
    Cell cell;
    Heading heading = Heading::N;
    std::string region_id;  // Belonging
};

struct TraversabilityEdge {
    std::string a, b;  // same-level node ids, a < b
};

struct SceneGraph {
    std::string building_id = "building_0";
    std::vector<RoomNode> rooms;        // sorted by world_index
    std::vector<RegionNode> regions;    // room-major, component order
    std::vector<FrontierNode> frontiers;
    std::vector<ObjectNode> objects;    // sorted by id
    std::optional<AgentNode> agent;
    std::vector<TraversabilityEdge> traversability;
    double max_proximity_m = 2.0;

    const RoomNode* find_room(const std::string& id) const;
    const RegionNode* find_region(const std::string& id) const;
    const FrontierNode* find_frontier(const std::string& id) const;
    const ObjectNode* find_object(const std::string& id) const;
};

// Folds one observation into the graph: upserts visible objects, recomputes
// regions as 4-connected components of explored free cells within each room
// footprint, repositions the agent, refreshes traversability edges. Throws
// InconsistentRoomPartition when an explored free cell maps to no room.
void update_scene_graph(SceneGraph& sg, const Observation& obs, const OccupancyGrid& grid,
                        const World& world);

// Deterministic JSON, fixed key order, positions as 3-decimal arrays.
std::string serialize_scene_graph(const SceneGraph& sg);

// Parses the wire JSON back into a graph (wire-visible fields only).
SceneGraph parse_scene_graph(const std::string& text);

// Empty iff all graph invariants hold; each violation names the node or edge.
std::vector<std::string> validate_scene_graph(const SceneGraph& sg);

}  // namespace eqa
