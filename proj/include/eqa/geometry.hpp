#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace eqa {

// Grid coordinates: x grows east (column index), y grows south (row index).
struct Cell {
    int x = 0;
    int y = 0;

    friend bool operator==(const Cell& a, const Cell& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(const Cell& a, const Cell& b) { return !(a == b); }
    // Lexicographic (x, y) order; used wherever the engine breaks ties "by cell order".
    friend bool operator<(const Cell& a, const Cell& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    }
};

struct CellHash {
    size_t operator()(const Cell& c) const {
        return std::hash<int64_t>{}((int64_t(c.x) << 32) ^ uint32_t(c.y));
    }
};

// Continuous coordinates in meters.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }
};

inline double dist2(const Vec2& a, const Vec2& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// Eight compass directions. North points to -y (up in the row-string rendering).
enum class Heading : uint8_t { N = 0, NE, E, SE, S, SW, W, NW };

inline const char* heading_name(Heading h) {
    static const char* names[8] = {"N", "NE", "E", "SE", "S", "SW", "W", "NW"};
    return names[uint8_t(h)];
}

bool parse_heading(const std::string& s, Heading& out);

inline Cell heading_offset(Heading h) {
    static const Cell off[8] = {{0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}};
    return off[uint8_t(h)];
}

// Angle of a heading in radians, atan2 convention (E = 0, S = +pi/2 since y grows south).
inline double heading_angle(Heading h) {
    const Cell o = heading_offset(h);
    return std::atan2(double(o.y), double(o.x));
}

// Wrap to (-pi, pi].
inline double wrap_angle(double a) {
    while (a > M_PI) a -= 2.0 * M_PI;
    while (a <= -M_PI) a += 2.0 * M_PI;
    return a;
}

// Nearest of the 8 compass directions to the bearing (dx, dy); ties pick the
// smaller enum value. (0, 0) maps to N.
Heading bearing_to_heading(double dx, double dy);

struct CellPose {
    Cell cell;
    Heading heading = Heading::N;

    friend bool operator==(const CellPose& a, const CellPose& b) {
        return a.cell == b.cell && a.heading == b.heading;
    }
};

// Cells covered by the integer Bresenham line from a to b, endpoints included.
std::vector<Cell> bresenham_line(Cell a, Cell b);

inline Vec2 cell_center(Cell c, double cell_size) {
    return {(c.x + 0.5) * cell_size, (c.y + 0.5) * cell_size};
}

inline Cell point_to_cell(const Vec2& p, double cell_size) {
    return {int(std::floor(p.x / cell_size)), int(std::floor(p.y / cell_size))};
}

// Fixed-point rendering used across the wire formats ("1.000"-style).
std::string format_fixed(double v, int decimals);

// Round to `decimals` places, half away from zero.
inline double quantize(double v, int decimals) {
    double scale = std::pow(10.0, decimals);
    return std::llround(v * scale) / scale;
}

}  // namespace eqa
