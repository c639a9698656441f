#include "eqa/worldgen.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "eqa/assets.hpp"
#include "eqa/errors.hpp"
#include "eqa/rng.hpp"

namespace eqa {

namespace {

constexpr int kMinRoomSide = 3;
constexpr int kAttempts = 32;

const std::vector<std::string> kColors = {"red",    "blue",  "green", "white",
                                          "black",  "yellow", "gray",  "brown"};
const std::set<std::string> kSwitchable = {"tv",    "lamp",      "computer", "stove",
                                           "toaster", "microwave", "printer"};

struct Door {
    Cell cell;
    size_t room;  // owning leaf index
};

// Splits the grid interior into n_rooms rectangles separated by 1-cell walls.
// Returns false when packing fails for this attempt.
bool split_rooms(Rng& rng, Rect interior, int n_rooms, int min_room_cells,
                 std::vector<Rect>& leaves) {
    leaves = {interior};
    while (int(leaves.size()) < n_rooms) {
        // Largest splittable leaf; ties by position for determinism.
        int best = -1;
        for (size_t i = 0; i < leaves.size(); ++i) {
            const Rect& r = leaves[i];
            const bool splittable = (r.x1 - r.x0 + 1) >= 2 * kMinRoomSide + 1 ||
                                    (r.y1 - r.y0 + 1) >= 2 * kMinRoomSide + 1;
            if (!splittable) continue;
            if (best < 0 || r.area() > leaves[size_t(best)].area()) best = int(i);
        }
        if (best < 0) return false;
        const Rect r = leaves[size_t(best)];
        const int w = r.x1 - r.x0 + 1, h = r.y1 - r.y0 + 1;
        const bool split_x = (w >= 2 * kMinRoomSide + 1) && (w >= h || h < 2 * kMinRoomSide + 1);
        Rect a = r, b = r;
        if (split_x) {
            const int s = rng.uniform_int(r.x0 + kMinRoomSide, r.x1 - kMinRoomSide);
            a.x1 = s - 1;
            b.x0 = s + 1;
        } else {
            const int s = rng.uniform_int(r.y0 + kMinRoomSide, r.y1 - kMinRoomSide);
            a.y1 = s - 1;
            b.y0 = s + 1;
        }
        leaves[size_t(best)] = a;
        leaves.push_back(b);
    }
    for (const Rect& r : leaves)
        if (r.area() < min_room_cells) return false;
    std::sort(leaves.begin(), leaves.end(), [](const Rect& a, const Rect& b) {
        return Cell{a.x0, a.y0} < Cell{b.x0, b.y0};
    });
    return true;
}

// Door candidates between a pair of leaves sharing a 1-cell wall.
std::vector<Cell> door_candidates(const Rect& a, const Rect& b) {
    std::vector<Cell> out;
    if (a.x1 + 2 == b.x0) {  // b right of a
        const int wall = a.x1 + 1;
        for (int y = std::max(a.y0, b.y0); y <= std::min(a.y1, b.y1); ++y)
            out.push_back({wall, y});
    } else if (b.x1 + 2 == a.x0) {
        return door_candidates(b, a);
    } else if (a.y1 + 2 == b.y0) {  // b below a
        const int wall = a.y1 + 1;
        for (int x = std::max(a.x0, b.x0); x <= std::min(a.x1, b.x1); ++x)
            out.push_back({x, wall});
    } else if (b.y1 + 2 == a.y0) {
        return door_candidates(b, a);
    }
    return out;
}

std::map<std::string, std::vector<std::string>> category_pools() {
    std::map<std::string, std::vector<std::string>> pools;
    for (const auto& [label, cat] : Assets::get().room_lexicon) pools[cat].push_back(label);
    return pools;  // map iteration keeps label order deterministic
}

struct QuestionDraft {
    Question q;
    bool ok = false;
};

QuestionDraft make_question(Rng& rng, const std::string& kind, const World& w,
                            const std::vector<std::string>& room_cats) {
    QuestionDraft out;
    const auto& objs = w.objects();
    auto cat_of = [&](const WorldObject& o) { return room_cats[size_t(w.room_index_at(o.cell))]; };

    auto label_count = [&](const std::string& label) {
        int n = 0;
        for (const auto& o : objs)
            if (o.label == label) ++n;
        return n;
    };
    auto unique_in_category = [&](const WorldObject& o) {
        for (const auto& other : objs)
            if (&other != &o && other.label == o.label && cat_of(other) == cat_of(o)) return false;
        return true;
    };

    if (kind == "identification") {
        std::vector<const WorldObject*> cands;
        for (const auto& o : objs)
            if (unique_in_category(o) && o.attributes.count("color")) cands.push_back(&o);
        if (cands.empty()) return out;
        const WorldObject* o = cands[size_t(rng.uniform_int(0, int(cands.size()) - 1))];
        const std::string correct = o->attributes.at("color");
        std::vector<std::string> wrong;
        for (const auto& c : kColors)
            if (c != correct) wrong.push_back(c);
        rng.shuffle(wrong);
        std::vector<std::string> choices = {correct, wrong[0], wrong[1], wrong[2]};
        rng.shuffle(choices);
        out.q.text = "What color is the " + o->label + " in the " + cat_of(*o) + "?";
        out.q.choices = choices;
        out.q.correct_index =
            int(std::find(choices.begin(), choices.end(), correct) - choices.begin());
        out.q.target_object_ids = {o->id};
        out.ok = true;
    } else if (kind == "counting") {
        std::set<std::string> labels;
        for (const auto& o : objs) labels.insert(o.label);
        std::vector<std::string> pool(labels.begin(), labels.end());
        const std::string label = pool[size_t(rng.uniform_int(0, int(pool.size()) - 1))];
        const int n = label_count(label);
        std::vector<int> nums = {std::max(0, n - 1), n, n + 1, n + 2};
        if (nums[0] == nums[1]) nums[0] = n + 3;
        std::vector<std::string> choices;
        for (int v : nums) choices.push_back(std::to_string(v));
        rng.shuffle(choices);
        out.q.text = "How many " + label + " objects are in the house?";
        out.q.choices = choices;
        out.q.correct_index = int(
            std::find(choices.begin(), choices.end(), std::to_string(n)) - choices.begin());
        for (const auto& o : objs)
            if (o.label == label) out.q.target_object_ids.push_back(o.id);
        out.ok = true;
    } else if (kind == "existence") {
        const WorldObject& o = objs[size_t(rng.uniform_int(0, int(objs.size()) - 1))];
        out.q.text = "Is there a " + o.label + " in the " + cat_of(o) + "?";
        out.q.choices = {"Yes", "No"};
        out.q.correct_index = 0;
        for (const auto& other : objs)
            if (other.label == o.label && cat_of(other) == cat_of(o))
                out.q.target_object_ids.push_back(other.id);
        out.ok = true;
    } else if (kind == "state") {
        std::vector<const WorldObject*> cands;
        for (const auto& o : objs)
            if (o.attributes.count("state") && unique_in_category(o)) cands.push_back(&o);
        if (cands.empty()) return out;
        const WorldObject* o = cands[size_t(rng.uniform_int(0, int(cands.size()) - 1))];
        out.q.text = "Is the " + o->label + " in the " + cat_of(*o) + " turned on?";
        out.q.choices = {"Yes", "No"};
        out.q.correct_index = o->attributes.at("state") == "on" ? 0 : 1;
        out.q.target_object_ids = {o->id};
        out.ok = true;
    } else if (kind == "location") {
        std::set<std::string> cats(room_cats.begin(), room_cats.end());
        if (cats.size() < 2) return out;
        std::vector<const WorldObject*> cands;
        for (const auto& o : objs)
            if (label_count(o.label) == 1) cands.push_back(&o);
        if (cands.empty()) return out;
        const WorldObject* o = cands[size_t(rng.uniform_int(0, int(cands.size()) - 1))];
        const std::string correct = cat_of(*o);
        std::vector<std::string> others;
        for (const auto& c : cats)
            if (c != correct) others.push_back(c);
        rng.shuffle(others);
        std::vector<std::string> choices = {correct};
        for (size_t i = 0; i < others.size() && choices.size() < 4; ++i)
            choices.push_back(others[i]);
        rng.shuffle(choices);
        out.q.text = "Which room is the " + o->label + " in?";
        out.q.choices = choices;
        out.q.correct_index =
            int(std::find(choices.begin(), choices.end(), correct) - choices.begin());
        out.q.target_object_ids = {o->id};
        out.ok = true;
    }
    return out;
}

}  // namespace

World generate_world(uint64_t seed, const WorldGenParams& params) {
    if (params.n_rooms < 1) throw InfeasibleParams("generate_world: n_rooms must be >= 1");
    if (params.n_objects < 1) throw InfeasibleParams("generate_world: n_objects must be >= 1");
    if (params.width < kMinRoomSide + 2 || params.height < kMinRoomSide + 2)
        throw InfeasibleParams("generate_world: grid too small");
    if ((params.width - 2) * (params.height - 2) < params.n_rooms * params.min_room_cells)
        throw InfeasibleParams("generate_world: grid too small for n_rooms * min_room_cells");

    Rng rng(seed);
    const std::vector<std::string> kCategories = {"kitchen",  "living room", "bedroom",
                                                  "bathroom", "office",      "dining room"};
    const auto pools = category_pools();

    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        std::vector<Rect> leaves;
        if (!split_rooms(rng, {1, 1, params.width - 2, params.height - 2}, params.n_rooms,
                         params.min_room_cells, leaves))
            continue;

        World w(params.width, params.height, params.cell_size);
        for (const Rect& r : leaves)
            for (int x = r.x0; x <= r.x1; ++x)
                for (int y = r.y0; y <= r.y1; ++y) w.set_occupancy({x, y}, CellState::Free);

        // Doors: spanning tree over leaf adjacency, plus occasional extras.
        struct Edge {
            size_t a, b;
            std::vector<Cell> cands;
        };
        std::vector<Edge> edges;
        for (size_t i = 0; i < leaves.size(); ++i)
            for (size_t j = i + 1; j < leaves.size(); ++j) {
                auto cands = door_candidates(leaves[i], leaves[j]);
                if (!cands.empty()) edges.push_back({i, j, std::move(cands)});
            }
        rng.shuffle(edges);
        std::vector<size_t> comp(leaves.size());
        for (size_t i = 0; i < comp.size(); ++i) comp[i] = i;
        std::function<size_t(size_t)> find = [&](size_t i) {
            return comp[i] == i ? i : comp[i] = find(comp[i]);
        };
        std::vector<Door> doors;
        for (const Edge& e : edges) {
            const bool tree_edge = find(e.a) != find(e.b);
            if (tree_edge)
                comp[find(e.a)] = find(e.b);
            else if (rng.uniform01() > 0.25)
                continue;
            // Two-cell doorways (0.5 m) when the shared wall allows.
            const int pick = rng.uniform_int(0, int(e.cands.size()) - 1);
            const Cell c = e.cands[size_t(pick)];
            w.set_occupancy(c, CellState::Free);
            doors.push_back({c, std::min(e.a, e.b)});
            if (pick + 1 < int(e.cands.size())) {
                const Cell c2 = e.cands[size_t(pick) + 1];
                w.set_occupancy(c2, CellState::Free);
                doors.push_back({c2, std::min(e.a, e.b)});
            }
        }
        bool connected = true;
        for (size_t i = 0; i < leaves.size(); ++i)
            if (find(i) != find(0)) connected = false;
        if (!connected) continue;

        // Rooms: leaf rect plus owned door cells as 1x1 rects.
        std::vector<std::string> cats = kCategories;
        rng.shuffle(cats);
        std::vector<Room> rooms;
        std::vector<std::string> room_cats;
        for (size_t i = 0; i < leaves.size(); ++i) {
            Room r;
            r.id = "room_" + std::to_string(i);
            r.label = cats[i % cats.size()];
            r.rects = {leaves[i]};
            for (const Door& d : doors)
                if (d.room == i) r.rects.push_back({d.cell.x, d.cell.y, d.cell.x, d.cell.y});
            room_cats.push_back(r.label);
            rooms.push_back(std::move(r));
        }
        w.set_rooms(std::move(rooms));

        // Spawn, then objects on distinct interior cells.
        std::vector<Cell> spawn_pool;
        for (const Rect& r : leaves)
            for (int x = r.x0; x <= r.x1; ++x)
                for (int y = r.y0; y <= r.y1; ++y) spawn_pool.push_back({x, y});
        const Cell spawn_cell = spawn_pool[size_t(rng.uniform_int(0, int(spawn_pool.size()) - 1))];
        w.set_agent_spawn({spawn_cell, Heading(rng.uniform_int(0, 7))});

        std::set<Cell> used{spawn_cell};
        bool placed_all = true;
        for (int i = 0; i < params.n_objects; ++i) {
            const size_t room_idx = size_t(i) % leaves.size();
            const Rect& r = leaves[room_idx];
            const auto pool_it = pools.find(room_cats[room_idx]);
            if (pool_it == pools.end() || pool_it->second.empty()) {
                placed_all = false;
                break;
            }
            WorldObject o;
            o.id = "object_" + std::to_string(i);
            o.label = pool_it->second[size_t(rng.uniform_int(0, int(pool_it->second.size()) - 1))];
            o.attributes["color"] = kColors[size_t(rng.uniform_int(0, int(kColors.size()) - 1))];
            if (kSwitchable.count(o.label))
                o.attributes["state"] = rng.uniform_int(0, 1) ? "on" : "off";
            bool found = false;
            for (int tries = 0; tries < 64 && !found; ++tries) {
                const Cell c{rng.uniform_int(r.x0, r.x1), rng.uniform_int(r.y0, r.y1)};
                if (!used.count(c)) {
                    o.cell = c;
                    used.insert(c);
                    found = true;
                }
            }
            if (!found) {
                placed_all = false;
                break;
            }
            w.add_object(std::move(o));
        }
        if (!placed_all) continue;

        // Question; fall back through the other templates when one is
        // infeasible for this layout.
        std::vector<std::string> kinds = {"identification", "counting", "existence", "state",
                                          "location"};
        std::string first = params.question_template;
        if (first == "mixed") first = kinds[size_t(rng.uniform_int(0, int(kinds.size()) - 1))];
        std::vector<std::string> order = {first};
        for (const auto& k : kinds)
            if (k != first) order.push_back(k);
        QuestionDraft draft;
        for (const auto& k : order) {
            draft = make_question(rng, k, w, room_cats);
            if (draft.ok) break;
        }
        if (!draft.ok) continue;
        w.set_question(std::move(draft.q));

        if (!validate_world(w).empty()) continue;
        return w;
    }
    throw InfeasibleParams("generate_world: packing failed after bounded retries");
}

}  // namespace eqa
