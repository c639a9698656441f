#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eqa/memory.hpp"
#include "eqa/scenegraph.hpp"

namespace eqa {

enum class Ablation { None, SgOnly, VisOnly, NoEnrich, CurrView };

const char* ablation_name(Ablation a);
bool parse_ablation(const std::string& s, Ablation& out);

enum class ImageRole { Memory, CurrentView };

struct PlannerImage {
    ImageRole role;
    std::string rendering;
};

struct PlannerInput {
    std::string question;
    std::vector<std::string> choices;
    std::string scene_graph_json;  // empty = no graph payload (vis-only)
    std::vector<PlannerImage> images;
    std::string history;
    std::string current_state;
    std::string system_prompt;
};

struct Action {
    enum class Kind { GotoObjectNode, GotoFrontierNode };
    Kind kind = Kind::GotoObjectNode;
    // GotoObjectNode
    std::string room_id, region_id, object_id;
    std::string explanation_room, explanation_obj;
    // GotoFrontierNode
    std::string frontier_id;
    std::string explanation_frontier;
};

struct PlannerOutput {
    int answer_index = 0;
    bool is_confident = false;
    double confidence_level = 0.0;
    std::string explanation_ans, explanation_conf;
    std::optional<Action> action;  // present iff not confident
    std::string image_description, scene_graph_description;
};

struct AgentState {
    std::string node_id;
    Vec2 position;
    std::string room_id, room_name;
    std::string rendered;
};

// "The agent is currently at node <id> at position [x, y, z] in room
// <room_id> <room_name>". Throws UnplacedAgent when the agent or its
// belonging chain is missing.
AgentState format_agent_state(const SceneGraph& sg);

// Assembles the planner payload under the given ablation: memory renderings
// first, the current view always last; SG-only drops images, Vis-only drops
// the graph, CurrView keeps only the current view.
PlannerInput build_planner_input(const Question& q, const std::string& scene_graph_json,
                                 const VisualMemory& mem, const Snapshot& current_view,
                                 const std::string& history, const std::string& current_state,
                                 const std::string& system_prompt, Ablation ablation);

// Wire request document; the scene_graph payload is spliced verbatim.
std::string render_planner_request(const PlannerInput& input);

// Wire response document (used by the scripted planner and fixtures).
std::string render_planner_response(const PlannerOutput& out);

// Parses and checks a raw response against the graph snapshot the input was
// built from. Throws SchemaError / RangeError / UnknownNode /
// HierarchyViolation.
PlannerOutput validate_planner_output(const std::string& raw, const SceneGraph& sg,
                                      int n_choices);

std::string answer_letter(int index);
std::string action_summary(const std::optional<Action>& action);

// History H: newest-first records
// "STEP t | STATE x | ANSWER a | CONFIDENT c | CONFIDENCE p | ACTION u".
struct HistoryEntry {
    int t = 0;
    std::string state;
    std::string answer;  // letter
    bool confident = false;
    double confidence = 0.0;
    std::string action;
};

struct History {
    std::vector<HistoryEntry> entries;  // newest first
    std::string rendered;
};

std::string render_history_record(const HistoryEntry& e);
History update_history(const History& hist, const HistoryEntry& e);
std::vector<HistoryEntry> parse_history(const std::string& rendered);

}  // namespace eqa
