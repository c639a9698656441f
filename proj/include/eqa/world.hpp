#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eqa/geometry.hpp"

namespace eqa {

enum class CellState : uint8_t { Free, Occupied };

// Inclusive rectangle of cells.
struct Rect {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    bool contains(Cell c) const { return c.x >= x0 && c.x <= x1 && c.y >= y0 && c.y <= y1; }
    int area() const { return (x1 - x0 + 1) * (y1 - y0 + 1); }
};

// Room footprint is a union of rectangles over free cells.
struct Room {
    std::string id;
    std::string label;  // ground-truth category, e.g. "kitchen"
    std::vector<Rect> rects;

    std::vector<Cell> cells() const;
};

struct WorldObject {
    std::string id;
    std::string label;
    Cell cell;
    std::map<std::string, std::string> attributes;  // canonical key order
};

struct Question {
    std::string text;
    std::vector<std::string> choices;  // 2..4 entries
    int correct_index = 0;
    std::vector<std::string> target_object_ids;
};

class World {
  public:
    World(int width, int height, double cell_size);

    int width() const { return width_; }
    int height() const { return height_; }
    double cell_size() const { return cell_size_; }

    bool in_bounds(Cell c) const {
        return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
    }
    CellState occupancy(Cell c) const { return occ_[idx(c)]; }
    void set_occupancy(Cell c, CellState s) { occ_[idx(c)] = s; }
    bool is_free(Cell c) const { return in_bounds(c) && occupancy(c) == CellState::Free; }

    const std::vector<Room>& rooms() const { return rooms_; }
    const std::vector<WorldObject>& objects() const { return objects_; }
    const CellPose& agent_spawn() const { return spawn_; }
    const Question& question() const { return question_; }

    void set_rooms(std::vector<Room> rooms);
    void add_object(WorldObject obj) { objects_.push_back(std::move(obj)); }
    void set_agent_spawn(CellPose p) { spawn_ = p; }
    void set_question(Question q) { question_ = std::move(q); }

    // Index into rooms() for the room whose footprint contains c, or -1.
    int room_index_at(Cell c) const { return room_of_[idx(c)]; }
    const WorldObject* find_object(const std::string& id) const;

  private:
    size_t idx(Cell c) const { return size_t(c.y) * width_ + c.x; }

    int width_, height_;
    double cell_size_;
    std::vector<CellState> occ_;
    std::vector<Room> rooms_;
    std::vector<int16_t> room_of_;
    std::vector<WorldObject> objects_;
    CellPose spawn_;
    Question question_;
};

// Empty list means the world satisfies every invariant: disjoint room
// footprints covering all free cells, 4-connected free space, objects on
// unique free cells, valid spawn and question.
std::vector<std::string> validate_world(const World& w);

// Scenario files: canonical structured-text encoding; save -> load -> save is
// byte-exact.
std::string save_scenario(const World& w);
World load_scenario(const std::string& text);
std::string save_scenario_file(const World& w, const std::string& path);
World load_scenario_file(const std::string& path);

}  // namespace eqa
