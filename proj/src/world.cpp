#include "eqa/world.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "eqa/errors.hpp"

namespace eqa {

std::vector<Cell> Room::cells() const {
    std::vector<Cell> out;
    for (const Rect& r : rects)
        for (int x = r.x0; x <= r.x1; ++x)
            for (int y = r.y0; y <= r.y1; ++y) out.push_back({x, y});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

World::World(int width, int height, double cell_size)
    : width_(width),
      height_(height),
      cell_size_(cell_size),
      occ_(size_t(width) * height, CellState::Occupied),
      room_of_(size_t(width) * height, -1) {}

void World::set_rooms(std::vector<Room> rooms) {
    rooms_ = std::move(rooms);
    std::fill(room_of_.begin(), room_of_.end(), int16_t(-1));
    for (size_t i = 0; i < rooms_.size(); ++i)
        for (const Cell& c : rooms_[i].cells())
            if (in_bounds(c)) room_of_[idx(c)] = int16_t(i);
}

const WorldObject* World::find_object(const std::string& id) const {
    for (const auto& o : objects_)
        if (o.id == id) return &o;
    return nullptr;
}

std::vector<std::string> validate_world(const World& w) {
    std::vector<std::string> out;

    // Room footprints: free cells only, disjoint, covering all free cells.
    std::vector<int> owner(size_t(w.width()) * w.height(), -1);
    for (size_t i = 0; i < w.rooms().size(); ++i) {
        for (const Cell& c : w.rooms()[i].cells()) {
            if (!w.in_bounds(c)) {
                out.push_back(w.rooms()[i].id + ": footprint cell out of bounds");
                continue;
            }
            if (!w.is_free(c)) out.push_back(w.rooms()[i].id + ": footprint covers an occupied cell");
            int& o = owner[size_t(c.y) * w.width() + c.x];
            if (o >= 0)
                out.push_back(w.rooms()[i].id + ": footprint overlaps " + w.rooms()[size_t(o)].id);
            else
                o = int(i);
        }
    }
    int n_free = 0;
    Cell first_free{-1, -1};
    for (int y = 0; y < w.height(); ++y)
        for (int x = 0; x < w.width(); ++x) {
            Cell c{x, y};
            if (!w.is_free(c)) continue;
            ++n_free;
            if (first_free.x < 0) first_free = c;
            if (owner[size_t(y) * w.width() + x] < 0)
                out.push_back("free cell (" + std::to_string(x) + "," + std::to_string(y) +
                              ") belongs to no room");
        }

    // 4-connectivity of free space.
    if (n_free > 0) {
        std::vector<uint8_t> seen(size_t(w.width()) * w.height(), 0);
        std::vector<Cell> stack{first_free};
        seen[size_t(first_free.y) * w.width() + first_free.x] = 1;
        int reached = 0;
        while (!stack.empty()) {
            Cell c = stack.back();
            stack.pop_back();
            ++reached;
            const Cell nbrs[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
            for (const Cell& n : nbrs) {
                if (!w.is_free(n)) continue;
                uint8_t& s = seen[size_t(n.y) * w.width() + n.x];
                if (!s) {
                    s = 1;
                    stack.push_back(n);
                }
            }
        }
        if (reached != n_free) out.push_back("free space is not 4-connected");
    }

    // Objects.
    std::set<std::string> ids;
    for (const auto& o : w.objects()) {
        if (o.label.empty()) out.push_back(o.id + ": empty label");
        if (!w.is_free(o.cell)) out.push_back(o.id + ": not on a free cell");
        if (!ids.insert(o.id).second) out.push_back(o.id + ": duplicate object id");
    }

    if (!w.is_free(w.agent_spawn().cell)) out.push_back("agent spawn not on a free cell");

    const Question& q = w.question();
    if (q.choices.size() < 2 || q.choices.size() > 4) out.push_back("question: choice count out of range");
    if (q.correct_index < 0 || size_t(q.correct_index) >= q.choices.size())
        out.push_back("question: correct_index out of range");
    for (const auto& t : q.target_object_ids)
        if (!w.find_object(t)) out.push_back("question: unknown target object " + t);

    return out;
}

namespace {

std::string attrs_to_string(const std::map<std::string, std::string>& attrs) {
    std::string s;
    for (const auto& [k, v] : attrs) {
        if (!s.empty()) s += ' ';
        s += k + "=" + v;
    }
    return s.empty() ? "-" : s;
}

std::map<std::string, std::string> parse_attrs(const std::string& s) {
    std::map<std::string, std::string> out;
    if (s == "-") return out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw Error("scenario: bad attribute '" + tok + "'");
        out[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return out;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (true) {
        size_t next = line.find(" | ", pos);
        if (next == std::string::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + 3;
    }
    return out;
}

}  // namespace

std::string save_scenario(const World& w) {
    std::ostringstream out;
    out << "# eqa scenario v1\n";
    out << "width: " << w.width() << "\n";
    out << "height: " << w.height() << "\n";
    out << "cell_size: " << format_fixed(w.cell_size(), 3) << "\n";
    out << "occupancy:\n";
    for (int y = 0; y < w.height(); ++y) {
        for (int x = 0; x < w.width(); ++x)
            out << (w.occupancy({x, y}) == CellState::Free ? '.' : '#');
        out << "\n";
    }
    out << "end_occupancy\n";
    for (const auto& r : w.rooms()) {
        out << "room: " << r.id << " | " << r.label << " |";
        for (const Rect& rc : r.rects)
            out << " " << rc.x0 << "," << rc.y0 << "," << rc.x1 << "," << rc.y1;
        out << "\n";
    }
    for (const auto& o : w.objects()) {
        out << "object: " << o.id << " | " << o.label << " | " << o.cell.x << "," << o.cell.y
            << " | " << attrs_to_string(o.attributes) << "\n";
    }
    out << "agent: " << w.agent_spawn().cell.x << "," << w.agent_spawn().cell.y << " | "
        << heading_name(w.agent_spawn().heading) << "\n";
    const Question& q = w.question();
    out << "question: " << q.text << "\n";
    for (const auto& c : q.choices) out << "choice: " << c << "\n";
    out << "correct: " << q.correct_index << "\n";
    out << "targets:";
    for (const auto& t : q.target_object_ids) out << " " << t;
    out << "\n";
    return out.str();
}

World load_scenario(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int width = -1, height = -1;
    double cell_size = 0.25;
    std::vector<std::string> occ_rows;
    std::vector<Room> rooms;
    std::vector<WorldObject> objects;
    CellPose spawn;
    Question q;
    bool in_occ = false;

    auto expect_prefix = [](const std::string& l, const char* p) {
        std::string pre(p);
        if (l.rfind(pre, 0) != 0) throw Error("scenario: expected '" + pre + "' in line: " + l);
        return l.substr(pre.size());
    };

    while (std::getline(in, line)) {
        if (in_occ) {
            if (line == "end_occupancy") {
                in_occ = false;
                continue;
            }
            occ_rows.push_back(line);
            continue;
        }
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("width: ", 0) == 0)
            width = std::stoi(line.substr(7));
        else if (line.rfind("height: ", 0) == 0)
            height = std::stoi(line.substr(8));
        else if (line.rfind("cell_size: ", 0) == 0)
            cell_size = std::stod(line.substr(11));
        else if (line == "occupancy:")
            in_occ = true;
        else if (line.rfind("room: ", 0) == 0) {
            auto f = split_fields(line.substr(6));
            if (f.size() != 3) throw Error("scenario: bad room line: " + line);
            Room r;
            r.id = f[0];
            r.label = f[1];
            std::istringstream rs(f[2]);
            std::string rect;
            while (rs >> rect) {
                Rect rc;
                if (std::sscanf(rect.c_str(), "%d,%d,%d,%d", &rc.x0, &rc.y0, &rc.x1, &rc.y1) != 4)
                    throw Error("scenario: bad rect '" + rect + "'");
                r.rects.push_back(rc);
            }
            rooms.push_back(std::move(r));
        } else if (line.rfind("object: ", 0) == 0) {
            auto f = split_fields(line.substr(8));
            if (f.size() != 4) throw Error("scenario: bad object line: " + line);
            WorldObject o;
            o.id = f[0];
            o.label = f[1];
            if (std::sscanf(f[2].c_str(), "%d,%d", &o.cell.x, &o.cell.y) != 2)
                throw Error("scenario: bad object cell: " + f[2]);
            o.attributes = parse_attrs(f[3]);
            objects.push_back(std::move(o));
        } else if (line.rfind("agent: ", 0) == 0) {
            auto f = split_fields(line.substr(7));
            if (f.size() != 2) throw Error("scenario: bad agent line: " + line);
            if (std::sscanf(f[0].c_str(), "%d,%d", &spawn.cell.x, &spawn.cell.y) != 2)
                throw Error("scenario: bad agent cell: " + f[0]);
            if (!parse_heading(f[1], spawn.heading)) throw Error("scenario: bad heading: " + f[1]);
        } else if (line.rfind("question: ", 0) == 0)
            q.text = line.substr(10);
        else if (line.rfind("choice: ", 0) == 0)
            q.choices.push_back(line.substr(8));
        else if (line.rfind("correct: ", 0) == 0)
            q.correct_index = std::stoi(line.substr(9));
        else if (line.rfind("targets:", 0) == 0) {
            std::istringstream ts(expect_prefix(line, "targets:"));
            std::string id;
            while (ts >> id) q.target_object_ids.push_back(id);
        } else
            throw Error("scenario: unrecognized line: " + line);
    }

    if (width <= 0 || height <= 0) throw Error("scenario: missing dimensions");
    if (int(occ_rows.size()) != height) throw Error("scenario: occupancy row count mismatch");
    World w(width, height, cell_size);
    for (int y = 0; y < height; ++y) {
        if (int(occ_rows[size_t(y)].size()) != width)
            throw Error("scenario: occupancy row width mismatch");
        for (int x = 0; x < width; ++x) {
            char ch = occ_rows[size_t(y)][size_t(x)];
            if (ch != '.' && ch != '#') throw Error("scenario: bad occupancy char");
            w.set_occupancy({x, y}, ch == '.' ? CellState::Free : CellState::Occupied);
        }
    }
    w.set_rooms(std::move(rooms));
    for (auto& o : objects) w.add_object(std::move(o));
    w.set_agent_spawn(spawn);
    w.set_question(std::move(q));
    return w;
}

std::string save_scenario_file(const World& w, const std::string& path) {
    std::string text = save_scenario(w);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write scenario file " + path);
    out << text;
    return text;
}

World load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read scenario file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_scenario(ss.str());
}

}  // namespace eqa
