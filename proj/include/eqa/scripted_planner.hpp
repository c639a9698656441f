#pragma once

#include <set>
#include <string>

#include "eqa/planner.hpp"
#include "eqa/rng.hpp"
#include "eqa/world.hpp"

namespace eqa {

// Deterministic offline stand-in for a VLM planner. Policy:
//   1. a target object's label appears in a memory snapshot or the current
//      view -> answer correct_index, confident, confidence 1.0;
//   2. else a target object's node is in the graph -> GotoObjectNode via its
//      belonging chain;
//   3. else -> GotoFrontierNode to the frontier whose proximity objects
//      overlap the question keywords most (ties: nearest centroid to the
//      agent, then smaller id). Throws NoFrontier when none exists.
// Ablations narrow the evidence: sg-only skips case 1, vis-only skips case 2
// and picks frontiers uniformly at random from the seeded generator,
// curr-view restricts case 1 to the current view.
class ScriptedPlanner {
  public:
    ScriptedPlanner(uint64_t seed, std::set<std::string> stopwords)
        : rng_(seed), stopwords_(std::move(stopwords)) {}

    // Returns the wire-format response document.
    std::string plan(const PlannerInput& input, const World& world, const SceneGraph& sg,
                     const VisualMemory& mem, const Snapshot& current_view, Ablation ablation);

  private:
    Rng rng_;
    std::set<std::string> stopwords_;
};

}  // namespace eqa
