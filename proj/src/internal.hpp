#pragma once

#include <vector>

#include "billiard/geometry.hpp"

namespace billiard::detail {

// Local coordinate on side s of the line through p along d.
inline double line_param(const Side& s, Vec2 p, Vec2 d) { return cross(p - s.a, d) / cross(s.tangent, d); }

// Direction g leaves vertex v into the interior wedge.
bool inward_at_vertex(const Polygon& poly, std::size_t v, double g);

struct Piece {
    double lo, hi;
    int target;
};

// Splits [lo, hi] on side k at the shadows of all vertices along gamma and
// finds the side each piece lands on.
std::vector<Piece> split_by_shadows(const Polygon& poly, int k, double lo, double hi, double gamma);

struct ReturnInfo {
    bool returned = false;
    double length = 0.0;
    int chords = 0;
    int first_section_chords = -1;  // first arrival on the start side with the start direction
};

// Traces until the ray comes back to its starting point with its starting direction.
ReturnInfo trace_return(const Polygon& poly, int side, double offset, double gamma, int cap);

}  // namespace billiard::detail
