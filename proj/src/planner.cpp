#include "eqa/planner.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "eqa/errors.hpp"

namespace eqa {

const char* ablation_name(Ablation a) {
    switch (a) {
        case Ablation::None: return "none";
        case Ablation::SgOnly: return "sg-only";
        case Ablation::VisOnly: return "vis-only";
        case Ablation::NoEnrich: return "no-enrich";
        case Ablation::CurrView: return "curr-view";
    }
    return "none";
}

bool parse_ablation(const std::string& s, Ablation& out) {
    for (Ablation a : {Ablation::None, Ablation::SgOnly, Ablation::VisOnly, Ablation::NoEnrich,
                       Ablation::CurrView}) {
        if (s == ablation_name(a)) {
            out = a;
            return true;
        }
    }
    return false;
}

AgentState format_agent_state(const SceneGraph& sg) {
    if (!sg.agent) throw UnplacedAgent("format_agent_state: no agent node");
    const RegionNode* region = sg.find_region(sg.agent->region_id);
    if (!region) throw UnplacedAgent("format_agent_state: agent region missing");
    const RoomNode* room = sg.find_room(region->room_id);
    if (!room) throw UnplacedAgent("format_agent_state: agent room missing");

    AgentState st;
    st.node_id = sg.agent->id;
    st.position = sg.agent->pos;
    st.room_id = room->id;
    st.room_name = room->name;
    st.rendered = "The agent is currently at node " + st.node_id + " at position [" +
                  format_fixed(st.position.x, 3) + ", " + format_fixed(st.position.y, 3) + ", " +
                  format_fixed(0.0, 3) + "] in room " + st.room_id + " " + st.room_name;
    return st;
}

PlannerInput build_planner_input(const Question& q, const std::string& scene_graph_json,
                                 const VisualMemory& mem, const Snapshot& current_view,
                                 const std::string& history, const std::string& current_state,
                                 const std::string& system_prompt, Ablation ablation) {
    PlannerInput in;
    in.question = q.text;
    in.choices = q.choices;
    in.history = history;
    in.current_state = current_state;
    in.system_prompt = system_prompt;

    if (ablation != Ablation::VisOnly) in.scene_graph_json = scene_graph_json;
    if (ablation != Ablation::SgOnly) {
        if (ablation != Ablation::CurrView)
            for (const auto& e : mem.entries)
                in.images.push_back({ImageRole::Memory, render_snapshot(e.snap)});
        in.images.push_back({ImageRole::CurrentView, render_snapshot(current_view)});
    }
    return in;
}

namespace {

std::string jstr(const std::string& s) {
    // nlohmann's escaper, reused for string literals in spliced documents.
    return nlohmann::json(s).dump();
}

}  // namespace

std::string render_planner_request(const PlannerInput& input) {
    std::string out = "{\"question\": " + jstr(input.question) + ", \"choices\": [";
    for (size_t i = 0; i < input.choices.size(); ++i)
        out += (i ? ", " : "") + jstr(input.choices[i]);
    out += "], \"scene_graph\": ";
    out += input.scene_graph_json.empty() ? "null" : input.scene_graph_json;
    out += ", \"images\": [";
    for (size_t i = 0; i < input.images.size(); ++i) {
        const auto& img = input.images[i];
        out += (i ? ", " : "");
        out += "{\"role\": \"";
        out += img.role == ImageRole::Memory ? "memory" : "current_view";
        out += "\", \"rendering\": " + jstr(img.rendering) + "}";
    }
    out += "], \"history\": " + jstr(input.history);
    out += ", \"current_state\": " + jstr(input.current_state);
    out += ", \"system_prompt\": " + jstr(input.system_prompt);
    out += "}";
    return out;
}

std::string answer_letter(int index) {
    return std::string(1, char('A' + index));
}

std::string action_summary(const std::optional<Action>& action) {
    if (!action) return "none";
    if (action->kind == Action::Kind::GotoObjectNode)
        return "Goto_object_node_step(" + action->object_id + ")";
    return "Goto_frontier_node_step(" + action->frontier_id + ")";
}

std::string render_planner_response(const PlannerOutput& out) {
    std::string s = "{\"answer\": \"" + answer_letter(out.answer_index) + "\"";
    s += ", \"is_confident\": ";
    s += out.is_confident ? "true" : "false";
    s += ", \"confidence_level\": " + format_fixed(out.confidence_level, 2);
    s += ", \"explanation_ans\": " + jstr(out.explanation_ans);
    s += ", \"explanation_conf\": " + jstr(out.explanation_conf);
    s += ", \"action\": ";
    if (!out.action) {
        s += "null";
    } else if (out.action->kind == Action::Kind::GotoObjectNode) {
        s += "{\"type\": \"Goto_object_node_step\", \"room_id\": " + jstr(out.action->room_id) +
             ", \"region_id\": " + jstr(out.action->region_id) +
             ", \"object_id\": " + jstr(out.action->object_id) +
             ", \"explanation_room\": " + jstr(out.action->explanation_room) +
             ", \"explanation_obj\": " + jstr(out.action->explanation_obj) + "}";
    } else {
        s += "{\"type\": \"Goto_frontier_node_step\", \"frontier_id\": " +
             jstr(out.action->frontier_id) +
             ", \"explanation_frontier\": " + jstr(out.action->explanation_frontier) + "}";
    }
    s += ", \"image_description\": " + jstr(out.image_description);
    s += ", \"scene_graph_description\": " + jstr(out.scene_graph_description);
    s += "}";
    return s;
}

namespace {

const nlohmann::json& require(const nlohmann::json& j, const char* key, const char* type) {
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(std::string("planner output: missing field '") + key + "'");
    const bool ok = (std::string(type) == "string" && it->is_string()) ||
                    (std::string(type) == "bool" && it->is_boolean()) ||
                    (std::string(type) == "number" && it->is_number()) ||
                    (std::string(type) == "action" && (it->is_object() || it->is_null()));
    if (!ok)
        throw SchemaError(std::string("planner output: field '") + key + "' must be " + type);
    return *it;
}

}  // namespace

PlannerOutput validate_planner_output(const std::string& raw, const SceneGraph& sg,
                                      int n_choices) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(raw);
    } catch (const std::exception& e) {
        throw SchemaError(std::string("planner output: not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError("planner output: not a JSON object");

    PlannerOutput out;
    const std::string answer = require(j, "answer", "string").get<std::string>();
    if (answer.size() != 1 || answer[0] < 'A' || answer[0] >= char('A' + n_choices))
        throw RangeError("planner output: answer '" + answer + "' outside A.." +
                         std::string(1, char('A' + n_choices - 1)));
    out.answer_index = answer[0] - 'A';

    out.is_confident = require(j, "is_confident", "bool").get<bool>();
    out.confidence_level = require(j, "confidence_level", "number").get<double>();
    if (out.confidence_level < 0.0 || out.confidence_level > 1.0)
        throw RangeError("planner output: confidence_level outside [0, 1]");
    out.explanation_ans = require(j, "explanation_ans", "string").get<std::string>();
    out.explanation_conf = require(j, "explanation_conf", "string").get<std::string>();
    out.image_description = require(j, "image_description", "string").get<std::string>();
    out.scene_graph_description = require(j, "scene_graph_description", "string").get<std::string>();

    const nlohmann::json& action = require(j, "action", "action");
    if (action.is_null()) {
        if (!out.is_confident)
            throw SchemaError("planner output: action required when not confident");
        return out;
    }
    if (out.is_confident) throw SchemaError("planner output: action must be null when confident");

    Action a;
    const std::string type = require(action, "type", "string").get<std::string>();
    if (type == "Goto_object_node_step") {
        a.kind = Action::Kind::GotoObjectNode;
        a.room_id = require(action, "room_id", "string").get<std::string>();
        a.region_id = require(action, "region_id", "string").get<std::string>();
        a.object_id = require(action, "object_id", "string").get<std::string>();
        a.explanation_room = require(action, "explanation_room", "string").get<std::string>();
        a.explanation_obj = require(action, "explanation_obj", "string").get<std::string>();

        const ObjectNode* obj = sg.find_object(a.object_id);
        if (!obj) throw UnknownNode("planner output: object '" + a.object_id + "' not in graph");
        const RegionNode* region = sg.find_region(a.region_id);
        if (!region) throw UnknownNode("planner output: region '" + a.region_id + "' not in graph");
        if (!sg.find_room(a.room_id))
            throw UnknownNode("planner output: room '" + a.room_id + "' not in graph");
        if (obj->region_id != a.region_id)
            throw HierarchyViolation("planner output: object '" + a.object_id +
                                     "' does not belong to region '" + a.region_id + "'");
        if (region->room_id != a.room_id)
            throw HierarchyViolation("planner output: region '" + a.region_id +
                                     "' does not belong to room '" + a.room_id + "'");
    } else if (type == "Goto_frontier_node_step") {
        a.kind = Action::Kind::GotoFrontierNode;
        a.frontier_id = require(action, "frontier_id", "string").get<std::string>();
        a.explanation_frontier = require(action, "explanation_frontier", "string").get<std::string>();
        if (!sg.find_frontier(a.frontier_id))
            throw UnknownNode("planner output: frontier '" + a.frontier_id + "' not in graph");
    } else {
        throw SchemaError("planner output: unknown action type '" + type + "'");
    }
    out.action = std::move(a);
    return out;
}

std::string render_history_record(const HistoryEntry& e) {
    return "STEP " + std::to_string(e.t) + " | STATE " + e.state + " | ANSWER " + e.answer +
           " | CONFIDENT " + (e.confident ? "True" : "False") + " | CONFIDENCE " +
           format_fixed(e.confidence, 2) + " | ACTION " + e.action;
}

History update_history(const History& hist, const HistoryEntry& e) {
    History out;
    out.entries.push_back(e);
    out.entries.insert(out.entries.end(), hist.entries.begin(), hist.entries.end());
    out.rendered = render_history_record(e);
    if (!hist.rendered.empty()) out.rendered += "\n" + hist.rendered;
    return out;
}

std::vector<HistoryEntry> parse_history(const std::string& rendered) {
    std::vector<HistoryEntry> out;
    if (rendered.empty()) return out;
    size_t pos = 0;
    while (pos <= rendered.size()) {
        size_t end = rendered.find('\n', pos);
        const std::string line =
            rendered.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        pos = end == std::string::npos ? rendered.size() + 1 : end + 1;

        std::vector<std::string> fields;
        size_t fpos = 0;
        while (true) {
            size_t next = line.find(" | ", fpos);
            if (next == std::string::npos) {
                fields.push_back(line.substr(fpos));
                break;
            }
            fields.push_back(line.substr(fpos, next - fpos));
            fpos = next + 3;
        }
        if (fields.size() != 6) throw SchemaError("history: malformed record: " + line);
        auto strip_tag = [&line](const std::string& f, const char* tag) {
            const std::string t(tag);
            if (f.rfind(t, 0) != 0) throw SchemaError("history: expected '" + t + "' in: " + line);
            return f.substr(t.size());
        };
        HistoryEntry e;
        e.t = std::stoi(strip_tag(fields[0], "STEP "));
        e.state = strip_tag(fields[1], "STATE ");
        e.answer = strip_tag(fields[2], "ANSWER ");
        const std::string conf = strip_tag(fields[3], "CONFIDENT ");
        if (conf != "True" && conf != "False") throw SchemaError("history: bad CONFIDENT: " + conf);
        e.confident = conf == "True";
        e.confidence = std::stod(strip_tag(fields[4], "CONFIDENCE "));
        e.action = strip_tag(fields[5], "ACTION ");
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace eqa
