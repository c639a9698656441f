#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace eqa {

// Repo-shipped data files: stopword list, room lexicon, planner system prompt.
struct Assets {
    std::set<std::string> stopwords;
    std::map<std::string, std::string> room_lexicon;  // object label -> room name
    std::string system_prompt;

    static Assets load(const std::string& dir);
    // Loads from the build-time data directory (EQA_DATA_DIR).
    static const Assets& get();
};

}  // namespace eqa
