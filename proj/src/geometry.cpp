#include "eqa/geometry.hpp"

#include <cstdlib>

namespace eqa {

bool parse_heading(const std::string& s, Heading& out) {
    for (int i = 0; i < 8; ++i) {
        if (s == heading_name(Heading(i))) {
            out = Heading(i);
            return true;
        }
    }
    return false;
}

Heading bearing_to_heading(double dx, double dy) {
    if (dx == 0.0 && dy == 0.0) return Heading::N;
    const double bearing = std::atan2(dy, dx);
    Heading best = Heading::N;
    double best_diff = 10.0;
    for (int i = 0; i < 8; ++i) {
        const double diff = std::fabs(wrap_angle(bearing - heading_angle(Heading(i))));
        if (diff < best_diff) {
            best_diff = diff;
            best = Heading(i);
        }
    }
    return best;
}

std::vector<Cell> bresenham_line(Cell a, Cell b) {
    std::vector<Cell> out;
    int x = a.x, y = a.y;
    const int dx = std::abs(b.x - a.x), dy = -std::abs(b.y - a.y);
    const int sx = a.x < b.x ? 1 : -1, sy = a.y < b.y ? 1 : -1;
    int err = dx + dy;
    while (true) {
        out.push_back({x, y});
        if (x == b.x && y == b.y) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
    }
    return out;
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    // Avoid "-0.000".
    std::string s(buf);
    if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s = s.substr(1);
    return s;
}

}  // namespace eqa
