#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "billiard/geometry.hpp"
#include "billiard/skeleton.hpp"
#include "billiard/swf.hpp"

namespace billiard {

Polygon rectangle_polygon(double a, double b);
// (0,0),(a,0),(a,b),(c,b),(c,d),(0,d) with a > c and d > b.
Polygon broken_rectangle(double a, double b, double c, double d);
// Unit side, side 0 on the x axis, counterclockwise.
Polygon regular_pentagon();

// A billiard with an optional channel seed used by the figure presets.
struct Preset {
    std::string name;
    Polygon polygon;
    std::optional<double> direction;
    std::optional<ChannelSeed> seed;
    std::optional<LShapeGeometry> lshape;
    std::optional<double> half_period;  // value quoted for the figure, when there is one
};

// Names: rectangle a b, lshape a b c d, triangle, pentagon, figure13A, figure16, figure17,
// figure18a, figure18b. Throws InvalidArgument for an unknown name or wrong parameter count.
Preset make_preset(std::string_view name, std::span<const double> params = {});

std::vector<std::string> preset_names();

}  // namespace billiard
