#pragma once

#include <string>

#include "eqa/world.hpp"

namespace eqa {

struct WorldGenParams {
    int width = 26;
    int height = 18;
    double cell_size = 0.25;
    int n_rooms = 4;
    int min_room_cells = 16;
    int n_objects = 10;
    // identification | counting | existence | state | location | mixed
    std::string question_template = "mixed";
};

// Deterministic function of (seed, params). The returned world satisfies every
// World invariant and carries one question whose target objects are placed.
// Throws InfeasibleParams when packing fails after bounded retries.
World generate_world(uint64_t seed, const WorldGenParams& params = {});

}  // namespace eqa
