#pragma once

#include <map>
#include <string>
#include <vector>

#include "eqa/scenegraph.hpp"

namespace eqa {

struct EnrichmentConfig {
    int j = 3;       // max proximity edges per frontier
    double d = 2.0;  // max proximity distance, meters
};

class RoomLabeler {
  public:
    virtual ~RoomLabeler() = default;
    virtual std::string label(const std::vector<std::string>& object_labels) = 0;
};

// Deterministic lexicon vote: each object label votes for a room category,
// majority wins, ties alphabetical. No votes -> "unknown room".
class RuleBasedLabeler : public RoomLabeler {
  public:
    explicit RuleBasedLabeler(std::map<std::string, std::string> lexicon)
        : lexicon_(std::move(lexicon)) {}
    static RuleBasedLabeler from_assets();

    std::string label(const std::vector<std::string>& object_labels) override;

  private:
    std::map<std::string, std::string> lexicon_;
};

// POSTs {"objects": [labels]} to the endpoint and expects {"room_name": ...}.
class RemoteRoomLabeler : public RoomLabeler {
  public:
    RemoteRoomLabeler(std::string endpoint, double timeout_s = 10.0)
        : endpoint_(std::move(endpoint)), timeout_s_(timeout_s) {}

    std::string label(const std::vector<std::string>& object_labels) override;

  private:
    std::string endpoint_;
    double timeout_s_;
};

// The prompt template an LLM-backed endpoint renders for a room's objects.
std::string room_prompt(const std::vector<std::string>& object_labels);

// Renames every room from the labels of the objects belonging to it (via its
// regions); rooms with zero objects become "unknown room". Only rooms whose
// object set changed since the last call are re-labeled. Labeler errors are
// rethrown as LabelerFailure naming the room.
void label_rooms(SceneGraph& sg, RoomLabeler& labeler);

// Replaces the graph's frontier nodes with one node per cluster and adds
// proximity edges to the j nearest object nodes within d meters (ties by
// smaller object id). Belonging goes to the room containing the centroid
// cell, or the nearest footprint among rooms present in the graph.
void enrich_frontiers(SceneGraph& sg, const std::vector<FrontierCluster>& clusters,
                      const EnrichmentConfig& cfg, const World& world);

}  // namespace eqa
