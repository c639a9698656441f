#include "eqa/scripted_planner.hpp"

#include <algorithm>
#include <cctype>

#include "eqa/errors.hpp"

namespace eqa {

namespace {

bool label_in_snapshot(const Snapshot& snap, const std::string& label) {
    return std::find(snap.labels.begin(), snap.labels.end(), label) != snap.labels.end();
}

std::set<std::string> label_tokens(const std::string& label) {
    std::set<std::string> out;
    std::string cur;
    for (char ch : label) {
        if (std::isalnum(uint8_t(ch))) {
            cur += char(std::tolower(uint8_t(ch)));
        } else if (!cur.empty()) {
            out.insert(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.insert(cur);
    return out;
}

std::string describe_images(const VisualMemory& mem, const Snapshot& current_view) {
    std::string s = "memory holds " + std::to_string(mem.entries.size()) + " snapshot(s); current view:";
    if (current_view.labels.empty()) {
        s += " nothing";
    } else {
        for (size_t i = 0; i < current_view.labels.size(); ++i)
            s += (i ? ", " : " ") + current_view.labels[i];
    }
    return s;
}

std::string describe_graph(const SceneGraph& sg) {
    return "rooms=" + std::to_string(sg.rooms.size()) +
           " regions=" + std::to_string(sg.regions.size()) +
           " objects=" + std::to_string(sg.objects.size()) +
           " frontiers=" + std::to_string(sg.frontiers.size());
}

}  // namespace

std::string ScriptedPlanner::plan(const PlannerInput& input, const World& world,
                                  const SceneGraph& sg, const VisualMemory& mem,
                                  const Snapshot& current_view, Ablation ablation) {
    const Question& q = world.question();
    PlannerOutput out;
    out.image_description = describe_images(mem, current_view);
    out.scene_graph_description = describe_graph(sg);

    // Case 1: visual evidence of a target.
    if (ablation != Ablation::SgOnly) {
        for (const auto& target : q.target_object_ids) {
            const WorldObject* obj = world.find_object(target);
            if (!obj) continue;
            bool seen = label_in_snapshot(current_view, obj->label);
            if (!seen && ablation != Ablation::CurrView)
                for (const auto& e : mem.entries)
                    if (label_in_snapshot(e.snap, obj->label)) seen = true;
            if (seen) {
                out.answer_index = q.correct_index;
                out.is_confident = true;
                out.confidence_level = 1.0;
                out.explanation_ans = "a view shows " + obj->label + ", which settles the question";
                out.explanation_conf = "visual evidence of " + obj->label + " observed";
                return render_planner_response(out);
            }
        }
    }

    out.answer_index = 0;
    out.is_confident = false;
    out.explanation_ans = "no view of a target object yet";

    // Case 2: a target node is already in the graph.
    if (ablation != Ablation::VisOnly) {
        std::vector<std::string> targets = q.target_object_ids;
        std::sort(targets.begin(), targets.end());
        for (const auto& target : targets) {
            const ObjectNode* node = sg.find_object(target);
            if (!node) continue;
            const RegionNode* region = sg.find_region(node->region_id);
            if (!region) continue;
            Action a;
            a.kind = Action::Kind::GotoObjectNode;
            a.object_id = node->id;
            a.region_id = region->id;
            a.room_id = region->room_id;
            a.explanation_room = "the target is mapped in " + a.room_id;
            a.explanation_obj = "inspecting " + node->label + " (" + node->id + ") up close";
            out.action = std::move(a);
            out.confidence_level = 0.2;
            out.explanation_conf = "target mapped but not yet inspected";
            return render_planner_response(out);
        }
    }

    // Case 3: frontier selection.
    if (sg.frontiers.empty())
        throw NoFrontier("scripted planner: no frontier left and no target found");

    size_t chosen = 0;
    if (ablation == Ablation::VisOnly) {
        chosen = size_t(rng_.uniform_int(0, int(sg.frontiers.size()) - 1));
    } else {
        const std::set<std::string> keywords = extract_keywords(input.question, stopwords_);
        int best_overlap = -1;
        double best_d2 = 0.0;
        for (size_t i = 0; i < sg.frontiers.size(); ++i) {
            const FrontierNode& f = sg.frontiers[i];
            std::set<std::string> tokens;
            for (const auto& oid : f.nearby_objects) {
                const ObjectNode* obj = sg.find_object(oid);
                if (!obj) continue;
                const auto toks = label_tokens(obj->label);
                tokens.insert(toks.begin(), toks.end());
            }
            int overlap = 0;
            for (const auto& k : keywords)
                if (tokens.count(k)) ++overlap;
            const double d2v = sg.agent ? dist2(f.centroid, sg.agent->pos) : 0.0;
            const bool better =
                overlap > best_overlap ||
                (overlap == best_overlap && d2v < best_d2) ||
                (overlap == best_overlap && d2v == best_d2 && f.id < sg.frontiers[chosen].id);
            if (best_overlap < 0 || better) {
                best_overlap = overlap;
                best_d2 = d2v;
                chosen = i;
            }
        }
    }

    const FrontierNode& f = sg.frontiers[chosen];
    Action a;
    a.kind = Action::Kind::GotoFrontierNode;
    a.frontier_id = f.id;
    a.explanation_frontier = "exploring " + f.id + " connected to:";
    if (f.nearby_objects.empty()) {
        a.explanation_frontier += " no nearby objects";
    } else {
        for (size_t i = 0; i < f.nearby_objects.size(); ++i) {
            const ObjectNode* obj = sg.find_object(f.nearby_objects[i]);
            a.explanation_frontier += (i ? ", " : " ") + f.nearby_objects[i] + " '" +
                                      (obj ? obj->label : "") + "'";
        }
    }
    out.action = std::move(a);
    out.confidence_level = 0.1;
    out.explanation_conf = "target not mapped; expanding the explored area";
    return render_planner_response(out);
}

}  // namespace eqa
