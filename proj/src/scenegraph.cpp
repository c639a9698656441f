#include "eqa/scenegraph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "eqa/errors.hpp"

namespace eqa {

const RoomNode* SceneGraph::find_room(const std::string& id) const {
    for (const auto& n : rooms)
        if (n.id == id) return &n;
    return nullptr;
}
const RegionNode* SceneGraph::find_region(const std::string& id) const {
    for (const auto& n : regions)
        if (n.id == id) return &n;
    return nullptr;
}
const FrontierNode* SceneGraph::find_frontier(const std::string& id) const {
    for (const auto& n : frontiers)
        if (n.id == id) return &n;
    return nullptr;
}
const ObjectNode* SceneGraph::find_object(const std::string& id) const {
    for (const auto& n : objects)
        if (n.id == id) return &n;
    return nullptr;
}

namespace {

Vec2 quantized_center(Cell c, double cell_size) {
    const Vec2 p = cell_center(c, cell_size);
    return {quantize(p.x, 3), quantize(p.y, 3)};
}

}  // namespace

void update_scene_graph(SceneGraph& sg, const Observation& obs, const OccupancyGrid& grid,
                        const World& world) {
    const int w = grid.width(), h = grid.height();

    // Regions: 4-connected components of explored free cells per room.
    std::vector<int> comp(size_t(w) * h, -1);
    std::vector<RegionNode> regions;
    std::set<int> rooms_seen;
    int next_region = 0;
    for (int x = 0; x < w; ++x)
        for (int y = 0; y < h; ++y) {
            const Cell start{x, y};
            if (grid.at(start) != Belief::Free || comp[size_t(y) * w + x] >= 0) continue;
            const int room = world.room_index_at(start);
            if (room < 0)
                throw InconsistentRoomPartition("explored free cell (" + std::to_string(x) + "," +
                                                std::to_string(y) + ") maps to no room");
            RegionNode region;
            region.id = "region_" + std::to_string(next_region);
            region.room_id = "room_" + std::to_string(room);
            std::vector<Cell> stack{start};
            comp[size_t(y) * w + x] = next_region;
            while (!stack.empty()) {
                const Cell c = stack.back();
                stack.pop_back();
                region.cells.push_back(c);
                const Cell nbrs[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
                for (const Cell& n : nbrs) {
                    if (!grid.is_free(n) || comp[size_t(n.y) * w + n.x] >= 0) continue;
                    if (world.room_index_at(n) != room) continue;
                    comp[size_t(n.y) * w + n.x] = next_region;
                    stack.push_back(n);
                }
            }
            std::sort(region.cells.begin(), region.cells.end());
            rooms_seen.insert(room);
            regions.push_back(std::move(region));
            ++next_region;
        }
    sg.regions = std::move(regions);

    // Rooms appear once any of their cells is explored; names persist.
    for (int room : rooms_seen) {
        const std::string id = "room_" + std::to_string(room);
        if (!sg.find_room(id)) {
            RoomNode n;
            n.id = id;
            n.world_index = room;
            sg.rooms.push_back(std::move(n));
        }
    }
    std::sort(sg.rooms.begin(), sg.rooms.end(),
              [](const RoomNode& a, const RoomNode& b) { return a.world_index < b.world_index; });

    auto region_of_cell = [&](Cell c) -> std::string {
        const int r = comp[size_t(c.y) * w + c.x];
        return r >= 0 ? "region_" + std::to_string(r) : std::string();
    };

    // Objects: upsert by world id; refresh every belonging edge since region
    // ids shift as components merge.
    for (const auto& s : obs.visible_objects) {
        if (!sg.find_object(s.id)) {
            ObjectNode n;
            n.id = s.id;
            n.label = s.label;
            n.cell = s.cell;
            n.pos = quantized_center(s.cell, world.cell_size());
            sg.objects.push_back(std::move(n));
        }
    }
    std::sort(sg.objects.begin(), sg.objects.end(),
              [](const ObjectNode& a, const ObjectNode& b) { return a.id < b.id; });
    for (auto& o : sg.objects) o.region_id = region_of_cell(o.cell);

    // Agent.
    AgentNode agent;
    agent.id = "agent_" + std::to_string(obs.t);
    agent.cell = obs.pose.cell;
    agent.heading = obs.pose.heading;
    agent.pos = quantized_center(obs.pose.cell, world.cell_size());
    agent.region_id = region_of_cell(obs.pose.cell);
    sg.agent = agent;

    // Traversability: region pairs with 4-adjacent member cells, and the
    // rooms they bridge.
    std::set<std::pair<std::string, std::string>> edges;
    for (int x = 0; x < w; ++x)
        for (int y = 0; y < h; ++y) {
            const int a = comp[size_t(y) * w + x];
            if (a < 0) continue;
            const Cell nbrs[2] = {{x + 1, y}, {x, y + 1}};
            for (const Cell& n : nbrs) {
                if (n.x >= w || n.y >= h) continue;
                const int b = comp[size_t(n.y) * w + n.x];
                if (b < 0 || b == a) continue;
                auto ra = "region_" + std::to_string(std::min(a, b));
                auto rb = "region_" + std::to_string(std::max(a, b));
                edges.insert({ra, rb});
                auto room_a = sg.find_region(ra)->room_id;
                auto room_b = sg.find_region(rb)->room_id;
                if (room_a != room_b)
                    edges.insert({std::min(room_a, room_b), std::max(room_a, room_b)});
            }
        }
    sg.traversability.clear();
    for (const auto& [a, b] : edges) sg.traversability.push_back({a, b});
}

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (uint8_t(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out;
}

std::string pos3(const Vec2& p) {
    return "[" + format_fixed(p.x, 3) + ", " + format_fixed(p.y, 3) + ", " +
           format_fixed(0.0, 3) + "]";
}

}  // namespace

std::string serialize_scene_graph(const SceneGraph& sg) {
    std::string out = "{\"building\": {\"id\": \"" + json_escape(sg.building_id) + "\"}, \"rooms\": [";

    bool first_room = true;
    for (const auto& room : sg.rooms) {
        if (!first_room) out += ", ";
        first_room = false;
        out += "{\"id\": \"" + json_escape(room.id) + "\", \"name\": \"" + json_escape(room.name) +
               "\", \"regions\": [";
        bool first_region = true;
        for (const auto& region : sg.regions) {
            if (region.room_id != room.id) continue;
            if (!first_region) out += ", ";
            first_region = false;
            out += "{\"id\": \"" + json_escape(region.id) + "\", \"objects\": [";
            bool first_obj = true;
            for (const auto& obj : sg.objects) {
                if (obj.region_id != region.id) continue;
                if (!first_obj) out += ", ";
                first_obj = false;
                out += "{\"id\": \"" + json_escape(obj.id) + "\", \"label\": \"" +
                       json_escape(obj.label) + "\", \"position\": " + pos3(obj.pos) + "}";
            }
            out += "]}";
        }
        out += "], \"frontiers\": [";
        bool first_frontier = true;
        for (const auto& f : sg.frontiers) {
            if (f.room_id != room.id) continue;
            if (!first_frontier) out += ", ";
            first_frontier = false;
            out += "{\"id\": \"" + json_escape(f.id) + "\", \"centroid\": " + pos3(f.centroid) +
                   ", \"nearby_objects\": [";
            bool first_near = true;
            for (const auto& oid : f.nearby_objects) {
                const ObjectNode* obj = sg.find_object(oid);
                if (!first_near) out += ", ";
                first_near = false;
                out += "{\"id\": \"" + json_escape(oid) + "\", \"label\": \"" +
                       json_escape(obj ? obj->label : "") + "\"}";
            }
            out += "]}";
        }
        out += "]}";
    }
    out += "], \"agent\": ";
    if (sg.agent) {
        const RegionNode* region = sg.find_region(sg.agent->region_id);
        const std::string room_id = region ? region->room_id : "";
        const RoomNode* room = sg.find_room(room_id);
        out += "{\"id\": \"" + json_escape(sg.agent->id) + "\", \"position\": " +
               pos3(sg.agent->pos) + ", \"room_id\": \"" + json_escape(room_id) +
               "\", \"room_name\": \"" + json_escape(room ? room->name : "") + "\"}";
    } else {
        out += "null";
    }
    out += "}";
    return out;
}

SceneGraph parse_scene_graph(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw SchemaError(std::string("scene graph: ") + e.what());
    }
    SceneGraph sg;
    sg.building_id = j.at("building").at("id").get<std::string>();
    int world_index = 0;
    for (const auto& room : j.at("rooms")) {
        RoomNode rn;
        rn.id = room.at("id").get<std::string>();
        rn.name = room.at("name").get<std::string>();
        rn.world_index = world_index++;
        sg.rooms.push_back(rn);
        for (const auto& region : room.at("regions")) {
            RegionNode rg;
            rg.id = region.at("id").get<std::string>();
            rg.room_id = rn.id;
            sg.regions.push_back(rg);
            for (const auto& obj : region.at("objects")) {
                ObjectNode on;
                on.id = obj.at("id").get<std::string>();
                on.label = obj.at("label").get<std::string>();
                on.pos = {obj.at("position")[0].get<double>(), obj.at("position")[1].get<double>()};
                on.region_id = rg.id;
                sg.objects.push_back(on);
            }
        }
        for (const auto& f : room.at("frontiers")) {
            FrontierNode fn;
            fn.id = f.at("id").get<std::string>();
            fn.room_id = rn.id;
            fn.centroid = {f.at("centroid")[0].get<double>(), f.at("centroid")[1].get<double>()};
            for (const auto& near : f.at("nearby_objects"))
                fn.nearby_objects.push_back(near.at("id").get<std::string>());
            sg.frontiers.push_back(fn);
        }
    }
    std::sort(sg.objects.begin(), sg.objects.end(),
              [](const ObjectNode& a, const ObjectNode& b) { return a.id < b.id; });
    if (!j.at("agent").is_null()) {
        AgentNode an;
        an.id = j["agent"].at("id").get<std::string>();
        an.pos = {j["agent"].at("position")[0].get<double>(),
                  j["agent"].at("position")[1].get<double>()};
        // Belonging region is not on the wire; attach to the first region of
        // the declared room so the chain stays resolvable.
        const std::string room_id = j["agent"].at("room_id").get<std::string>();
        for (const auto& rg : sg.regions)
            if (rg.room_id == room_id) {
                an.region_id = rg.id;
                break;
            }
        sg.agent = an;
    }
    return sg;
}

std::vector<std::string> validate_scene_graph(const SceneGraph& sg) {
    std::vector<std::string> out;

    enum Level { kNone = 0, kObject = 2, kRegionLevel = 3, kRoom = 4 };
    auto level_of = [&](const std::string& id) -> int {
        if (sg.find_room(id)) return kRoom;
        if (sg.find_region(id) || sg.find_frontier(id)) return kRegionLevel;
        if (sg.find_object(id)) return kObject;
        if (sg.agent && sg.agent->id == id) return kObject;
        return kNone;
    };

    if (sg.building_id.empty()) out.push_back("building: empty id");

    std::set<std::string> ids{sg.building_id};
    auto check_unique = [&](const std::string& id, const char* kind) {
        if (!ids.insert(id).second) out.push_back(std::string(kind) + " " + id + ": duplicate id");
    };

    for (const auto& r : sg.rooms) check_unique(r.id, "room");
    for (const auto& r : sg.regions) {
        check_unique(r.id, "region");
        if (r.room_id.empty())
            out.push_back(r.id + ": no belonging room");
        else if (!sg.find_room(r.room_id))
            out.push_back(r.id + ": belonging room '" + r.room_id + "' missing");
    }
    for (const auto& f : sg.frontiers) {
        check_unique(f.id, "frontier");
        if (f.room_id.empty())
            out.push_back(f.id + ": no belonging room");
        else if (!sg.find_room(f.room_id))
            out.push_back(f.id + ": belonging room '" + f.room_id + "' missing");
        for (const auto& oid : f.nearby_objects) {
            const ObjectNode* obj = sg.find_object(oid);
            if (!obj) {
                out.push_back(f.id + ": proximity edge to missing object '" + oid + "'");
                continue;
            }
            const double d = std::sqrt(dist2(f.centroid, obj->pos));
            if (d > sg.max_proximity_m + 1e-9)
                out.push_back(f.id + " -> " + oid + ": proximity edge spans " +
                              format_fixed(d, 3) + " m > " + format_fixed(sg.max_proximity_m, 3) +
                              " m");
        }
    }
    for (const auto& o : sg.objects) {
        check_unique(o.id, "object");
        if (o.region_id.empty())
            out.push_back(o.id + ": no belonging region");
        else if (!sg.find_region(o.region_id))
            out.push_back(o.id + ": belonging region '" + o.region_id + "' missing");
    }
    if (sg.agent) {
        check_unique(sg.agent->id, "agent");
        if (sg.agent->region_id.empty())
            out.push_back(sg.agent->id + ": no belonging region");
        else if (!sg.find_region(sg.agent->region_id))
            out.push_back(sg.agent->id + ": belonging region '" + sg.agent->region_id +
                          "' missing");
    }

    for (const auto& e : sg.traversability) {
        const int la = level_of(e.a), lb = level_of(e.b);
        if (la == kNone) out.push_back("traversability " + e.a + "--" + e.b + ": missing node " + e.a);
        if (lb == kNone) out.push_back("traversability " + e.a + "--" + e.b + ": missing node " + e.b);
        if (la != kNone && lb != kNone && la != lb)
            out.push_back("traversability " + e.a + "--" + e.b + ": crosses levels");
    }

    std::set<Cell> seen;
    for (const auto& r : sg.regions)
        for (const Cell& c : r.cells)
            if (!seen.insert(c).second)
                out.push_back(r.id + ": cell (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                              ") in multiple regions");

    return out;
}

}  // namespace eqa
