#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "eqa/grid.hpp"
#include "eqa/world.hpp"

namespace eqa::test {

// World from row strings ('.' free, '#' occupied); all free cells form one
// room unless explicit rooms are set afterwards.
inline World world_from_rows(const std::vector<std::string>& rows, double cell_size = 0.25) {
    const int h = int(rows.size());
    const int w = int(rows.front().size());
    World world(w, h, cell_size);
    Room room;
    room.id = "room_0";
    room.label = "living room";
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (rows[size_t(y)][size_t(x)] == '.') {
                world.set_occupancy({x, y}, CellState::Free);
                room.rects.push_back({x, y, x, y});
            }
    world.set_rooms({room});
    Question q;
    q.text = "Is there a couch in the living room?";
    q.choices = {"Yes", "No"};
    q.correct_index = 0;
    world.set_question(q);
    return world;
}

// Belief grid from row strings ('.' Free, '#' Occupied, '?' Unknown).
inline OccupancyGrid grid_from_rows(const std::vector<std::string>& rows,
                                    double cell_size = 0.25) {
    const int h = int(rows.size());
    const int w = int(rows.front().size());
    OccupancyGrid grid(w, h, cell_size);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            switch (rows[size_t(y)][size_t(x)]) {
                case '.': grid.set({x, y}, Belief::Free); break;
                case '#': grid.set({x, y}, Belief::Occupied); break;
                default: break;
            }
        }
    return grid;
}

inline std::string read_golden(const std::string& name) {
    const std::string path = std::string(EQA_GOLDEN_DIR) + "/" + name;
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(bool(in), "missing golden file ", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// With EQA_UPDATE_GOLDEN set, rewrites the fixture instead of comparing.
// Regenerated files are for review before committing.
inline std::string check_golden(const std::string& name, const std::string& actual) {
    if (std::getenv("EQA_UPDATE_GOLDEN")) {
        std::ofstream out(std::string(EQA_GOLDEN_DIR) + "/" + name, std::ios::binary);
        out << actual;
        return actual;
    }
    return read_golden(name);
}

}  // namespace eqa::test
