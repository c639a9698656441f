#include "eqa/memory.hpp"

#include <algorithm>
#include <cctype>

#include "eqa/errors.hpp"

namespace eqa {

namespace {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (std::isalnum(uint8_t(ch))) {
            cur += char(std::tolower(uint8_t(ch)));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace

std::set<std::string> extract_keywords(const std::string& question_text,
                                       const std::set<std::string>& stopwords) {
    const std::vector<std::string> tokens = tokenize(question_text);
    if (tokens.empty()) throw EmptyQuestion("extract_keywords: question has no tokens");
    std::set<std::string> out;
    for (const auto& t : tokens)
        if (!stopwords.count(t)) out.insert(t);
    if (out.empty()) out.insert(tokens.begin(), tokens.end());
    return out;
}

double LexicalOverlapScorer::score(const std::set<std::string>& keywords,
                                   const Snapshot& snap) const {
    if (keywords.empty()) return 0.0;
    std::set<std::string> label_tokens;
    for (const auto& label : snap.labels)
        for (const auto& t : tokenize(label)) label_tokens.insert(t);
    int matched = 0;
    for (const auto& k : keywords)
        if (label_tokens.count(k)) ++matched;
    return double(matched) / double(keywords.size());
}

void update_visual_memory(VisualMemory& mem, const std::vector<Snapshot>& buffer,
                          const std::set<std::string>& keywords, const RelevanceScorer& scorer,
                          int sampling_period) {
    if (sampling_period < 1) throw Error("update_visual_memory: sampling_period must be >= 1");

    std::vector<Snapshot> candidates;
    for (const auto& e : mem.entries) candidates.push_back(e.snap);
    for (size_t i = 0; i < buffer.size(); ++i) {
        if (buffer[i].t % sampling_period != 0 && i + 1 != buffer.size()) continue;
        const bool dup = std::any_of(candidates.begin(), candidates.end(), [&](const Snapshot& s) {
            return s.t == buffer[i].t && s.hash == buffer[i].hash;
        });
        if (!dup) candidates.push_back(buffer[i]);
    }

    // Bounded insertion into the ranked top-K (tests check against a
    // full-sort-then-truncate oracle).
    auto ranks_before = [](const ScoredSnapshot& a, const ScoredSnapshot& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.snap.t != b.snap.t) return a.snap.t < b.snap.t;
        return a.snap.hash < b.snap.hash;
    };
    std::vector<ScoredSnapshot> kept;
    for (const auto& snap : candidates) {
        const ScoredSnapshot entry{snap, scorer.score(keywords, snap)};
        auto pos = std::upper_bound(kept.begin(), kept.end(), entry, ranks_before);
        kept.insert(pos, entry);
        if (int(kept.size()) > mem.capacity) kept.pop_back();
    }
    mem.entries = std::move(kept);
}

}  // namespace eqa
