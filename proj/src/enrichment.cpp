#include "eqa/enrichment.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "eqa/assets.hpp"
#include "eqa/errors.hpp"

namespace eqa {

RuleBasedLabeler RuleBasedLabeler::from_assets() {
    return RuleBasedLabeler(Assets::get().room_lexicon);
}

std::string RuleBasedLabeler::label(const std::vector<std::string>& object_labels) {
    std::map<std::string, int> votes;
    for (const auto& l : object_labels) {
        auto it = lexicon_.find(l);
        if (it != lexicon_.end()) ++votes[it->second];
    }
    if (votes.empty()) return "unknown room";
    std::string best;
    int best_votes = 0;
    for (const auto& [name, n] : votes) {  // map order breaks ties alphabetically
        if (n > best_votes) {
            best = name;
            best_votes = n;
        }
    }
    return best;
}

std::string room_prompt(const std::vector<std::string>& object_labels) {
    std::string list;
    for (size_t i = 0; i < object_labels.size(); ++i) list += (i ? ", " : "") + object_labels[i];
    return "Which room are these objects " + list + " most likely located in?";
}

std::string RemoteRoomLabeler::label(const std::vector<std::string>& object_labels) {
    std::smatch m;
    static const std::regex url_re(R"(^(https?)://([^:/]+):(\d+)(/.*)?$)");
    if (!std::regex_match(endpoint_, m, url_re))
        throw TransportError("room labeler: bad endpoint '" + endpoint_ + "'");
    httplib::Client client(m[2].str(), std::stoi(m[3].str()));
    client.set_connection_timeout(int(timeout_s_), 0);
    client.set_read_timeout(int(timeout_s_), 0);

    nlohmann::ordered_json req;
    req["objects"] = object_labels;
    const std::string path = m[4].matched && m[4].length() ? m[4].str() : "/";
    auto res = client.Post(path, req.dump(), "application/json");
    if (!res) throw TransportError("room labeler: no response from " + endpoint_);
    if (res->status != 200)
        throw TransportError("room labeler: HTTP " + std::to_string(res->status));
    try {
        return nlohmann::json::parse(res->body).at("room_name").get<std::string>();
    } catch (const std::exception& e) {
        throw SchemaError(std::string("room labeler: bad response: ") + e.what());
    }
}

void label_rooms(SceneGraph& sg, RoomLabeler& labeler) {
    for (auto& room : sg.rooms) {
        // Object labels for this room via its regions, ordered by object id.
        std::vector<std::string> labels;
        for (const auto& obj : sg.objects) {
            const RegionNode* region = sg.find_region(obj.region_id);
            if (region && region->room_id == room.id) labels.push_back(obj.label);
        }
        std::string sig;
        for (const auto& l : labels) sig += l + "|";
        if (sig == room.labeled_sig && !room.labeled_sig.empty()) continue;
        if (labels.empty()) {
            room.name = "unknown room";
        } else {
            try {
                room.name = labeler.label(labels);
            } catch (const std::exception& e) {
                throw LabelerFailure(room.id + ": " + e.what());
            }
        }
        room.labeled_sig = sig.empty() ? "|" : sig;
    }
}

void enrich_frontiers(SceneGraph& sg, const std::vector<FrontierCluster>& clusters,
                      const EnrichmentConfig& cfg, const World& world) {
    sg.max_proximity_m = cfg.d;
    sg.frontiers.clear();
    for (const auto& cluster : clusters) {
        FrontierNode f;
        f.id = cluster.id;
        f.centroid = {quantize(cluster.centroid.x, 3), quantize(cluster.centroid.y, 3)};
        f.cells = cluster.cells;

        // Belonging: containing room when its node exists, else the nearest
        // footprint cell among rooms already in the graph.
        const Cell ccell = point_to_cell(f.centroid, world.cell_size());
        int room_idx = world.in_bounds(ccell) ? world.room_index_at(ccell) : -1;
        if (room_idx >= 0 && !sg.find_room("room_" + std::to_string(room_idx))) room_idx = -1;
        if (room_idx < 0) {
            double best_d2 = 0;
            for (const auto& room : sg.rooms) {
                if (room.world_index < 0 || room.world_index >= int(world.rooms().size())) continue;
                for (const Cell& c : world.rooms()[size_t(room.world_index)].cells()) {
                    const double d2v = dist2(cell_center(c, world.cell_size()), f.centroid);
                    if (room_idx < 0 || d2v < best_d2) {
                        best_d2 = d2v;
                        room_idx = room.world_index;
                    }
                }
            }
        }
        if (room_idx >= 0) f.room_id = "room_" + std::to_string(room_idx);

        // Top-j nearest objects within d: bounded insertion, ties by id.
        struct Near {
            double d2;
            const ObjectNode* obj;
        };
        std::vector<Near> top;
        const double d2_max = cfg.d * cfg.d;
        for (const auto& obj : sg.objects) {
            const double d2v = dist2(f.centroid, obj.pos);
            if (d2v > d2_max) continue;
            Near n{d2v, &obj};
            auto pos = std::upper_bound(top.begin(), top.end(), n, [](const Near& a, const Near& b) {
                if (a.d2 != b.d2) return a.d2 < b.d2;
                return a.obj->id < b.obj->id;
            });
            top.insert(pos, n);
            if (int(top.size()) > cfg.j) top.pop_back();
        }
        for (const auto& n : top) f.nearby_objects.push_back(n.obj->id);

        sg.frontiers.push_back(std::move(f));
    }
}

}  // namespace eqa
