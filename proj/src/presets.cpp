#include "billiard/presets.hpp"

#include <cmath>
#include <numbers>

#include "billiard/error.hpp"

namespace billiard {

namespace {

constexpr double pi = std::numbers::pi;

void need(std::span<const double> params, std::size_t count, std::string_view name)
{
    if (params.size() != count)
        fail(ErrorCode::InvalidArgument, std::string(name) + " takes " + std::to_string(count) + " parameters");
}

Polygon from_lengths(std::span<const double> lengths, double turn)
{
    std::vector<Vec2> v{{0.0, 0.0}};
    for (std::size_t k = 0; k + 1 < lengths.size(); ++k) v.push_back(v.back() + lengths[k] * direction(static_cast<double>(k) * turn));
    return build_polygon(v);
}

}  // namespace

Polygon rectangle_polygon(double a, double b)
{
    if (!(a > 0 && b > 0)) fail(ErrorCode::InvalidArgument, "rectangle sides must be positive");
    return build_polygon({{0, 0}, {a, 0}, {a, b}, {0, b}});
}

Polygon broken_rectangle(double a, double b, double c, double d)
{
    if (!(a > c && c > 0 && d > b && b > 0)) fail(ErrorCode::InvalidArgument, "need a > c > 0 and d > b > 0");
    return build_polygon({{0, 0}, {a, 0}, {a, b}, {c, b}, {c, d}, {0, d}});
}

Polygon regular_pentagon()
{
    const double ones[] = {1, 1, 1, 1, 1};
    return from_lengths(ones, 2 * pi / 5);
}

Preset make_preset(std::string_view name, std::span<const double> params)
{
    Preset p;
    p.name = std::string(name);
    if (name == "rectangle") {
        need(params, 2, name);
        p.polygon = rectangle_polygon(params[0], params[1]);
    } else if (name == "lshape") {
        need(params, 4, name);
        p.polygon = broken_rectangle(params[0], params[1], params[2], params[3]);
    } else if (name == "triangle") {
        need(params, 0, name);
        p.polygon = equilateral_triangle(3.0);
    } else if (name == "pentagon") {
        need(params, 0, name);
        p.polygon = regular_pentagon();
    } else if (name == "figure13A") {
        need(params, 0, name);
        p.lshape = LShapeGeometry{};
        p.polygon = lshape_polygon(*p.lshape);
        p.direction = std::atan2(p.lshape->height, p.lshape->column);
    } else if (name == "figure16") {
        need(params, 0, name);
        p.polygon = regular_pentagon();
        p.direction = pi / 5;
        p.seed = ChannelSeed{0, 0.25};
        p.half_period = 10 * std::cos(pi / 5);
    } else if (name == "figure17") {
        need(params, 0, name);
        p.polygon = regular_pentagon();
        p.direction = pi / 2;
        p.seed = ChannelSeed{0, 0.35};
        p.half_period = 3 * std::cos(pi / 10) + 2 * std::sin(pi / 5);
    } else if (name == "figure18a") {
        need(params, 0, name);
        // equiangular pentagon stretched so one vertical channel fits between sides 1 and 4
        const double r5 = std::sqrt(5.0);
        const double lengths[] = {1.0, (25 - r5) / 10, (15 + r5) / 10, 3 * r5 / 5, (5 + 9 * r5) / 10};
        p.polygon = from_lengths(lengths, 2 * pi / 5);
        p.direction = pi / 2;
        p.seed = ChannelSeed{0, 0.15};
        p.half_period = 2 / std::tan(pi / 10) + std::cos(pi / 10);
    } else if (name == "figure18b") {
        need(params, 0, name);
        p.polygon = build_polygon({{0, 0}, {1, 0}, {1.275, 0.93}, {0.4193966230133745, 1.2545955018929762}, {-0.1, 0.7437157363659279}},
                                  std::nullopt, AnglePolicy::AllowIrrational);
        p.direction = pi / 2;
        p.seed = ChannelSeed{0, 0.25};
        p.half_period = 2 * std::tan(pi / 10) + 3 * std::cos(pi / 10);
    } else {
        fail(ErrorCode::InvalidArgument, "unknown preset " + std::string(name));
    }
    return p;
}

std::vector<std::string> preset_names()
{
    return {"rectangle", "lshape", "triangle", "pentagon", "figure13A", "figure16", "figure17", "figure18a", "figure18b"};
}

}  // namespace billiard
