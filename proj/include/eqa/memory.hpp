#pragma once

#include <set>
#include <string>
#include <vector>

#include "eqa/observe.hpp"

namespace eqa {

// Lowercased question tokens minus the shipped stopword list; falls back to
// all tokens when every token is a stopword. Throws EmptyQuestion when the
// question has no tokens at all.
std::set<std::string> extract_keywords(const std::string& question_text,
                                       const std::set<std::string>& stopwords);

class RelevanceScorer {
  public:
    virtual ~RelevanceScorer() = default;
    // Pure per (keywords, snapshot); in [0, 1].
    virtual double score(const std::set<std::string>& keywords, const Snapshot& snap) const = 0;
};

// Stand-in for an image-text embedding model: the fraction of keywords that
// match a token of some visible label.
class LexicalOverlapScorer : public RelevanceScorer {
  public:
    double score(const std::set<std::string>& keywords, const Snapshot& snap) const override;
};

struct ScoredSnapshot {
    Snapshot snap;
    double score = 0.0;
};

// Ranked task-relevant snapshots: descending score, then ascending t, then
// ascending hash; at most `capacity` entries.
struct VisualMemory {
    int capacity = 2;
    std::vector<ScoredSnapshot> entries;
};

// Thins the buffer to snapshots with t % sampling_period == 0 plus the final
// snapshot of the executed trajectory, merges with the current entries,
// rescores, and keeps the top-K.
void update_visual_memory(VisualMemory& mem, const std::vector<Snapshot>& buffer,
                          const std::set<std::string>& keywords, const RelevanceScorer& scorer,
                          int sampling_period);

}  // namespace eqa
