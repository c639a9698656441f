#include "eqa/assets.hpp"

#include <fstream>
#include <sstream>

#include "eqa/errors.hpp"

#ifndef EQA_DATA_DIR
#define EQA_DATA_DIR "data"
#endif

namespace eqa {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read asset file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

Assets Assets::load(const std::string& dir) {
    Assets a;

    std::istringstream sw(read_file(dir + "/stopwords.txt"));
    std::string line;
    while (std::getline(sw, line)) {
        line = strip(line);
        if (line.empty() || line[0] == '#') continue;
        a.stopwords.insert(line);
    }

    std::istringstream lex(read_file(dir + "/room_lexicon.txt"));
    while (std::getline(lex, line)) {
        line = strip(line);
        if (line.empty() || line[0] == '#') continue;
        size_t sep = line.find(" | ");
        if (sep == std::string::npos) throw Error("room_lexicon: bad line: " + line);
        a.room_lexicon[strip(line.substr(0, sep))] = strip(line.substr(sep + 3));
    }

    a.system_prompt = read_file(dir + "/system_prompt.txt");
    return a;
}

const Assets& Assets::get() {
    static const Assets a = load(EQA_DATA_DIR);
    return a;
}

}  // namespace eqa
