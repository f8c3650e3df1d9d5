#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace billiard {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 direction(double gamma) { return {std::cos(gamma), std::sin(gamma)}; }

constexpr double two_pi = 2.0 * std::numbers::pi;

// Maps an angle to [0, 2pi).
double wrap_angle(double a);
// Signed difference a - b mapped to (-pi, pi].
double angle_diff(double a, double b);

struct RationalAngle {
    int p = 1;
    int q = 1;
    double radians() const { return std::numbers::pi * p / q; }
    friend bool operator==(RationalAngle, RationalAngle) = default;
};

std::optional<RationalAngle> detect_rational_angle(double radians);

enum class AnglePolicy { RequireRational, AllowIrrational };

struct Side {
    Vec2 a;
    Vec2 b;
    Vec2 tangent;  // unit, from a to b
    double length = 0.0;
    double beta = 0.0;  // inclination of the tangent
    double s0 = 0.0;    // arc length at a
};

struct BoundaryCoordinate {
    double s = 0.0;
    int side_index = 0;
    double beta = 0.0;
};

// Simple polygon with counter-clockwise vertex order; side k runs from vertex k to k+1.
class Polygon {
public:
    Polygon() = default;
    Polygon(std::vector<Vec2> vertices, std::vector<RationalAngle> angles);

    std::span<const Vec2> vertices() const { return vertices_; }
    std::span<const Side> sides() const { return sides_; }
    // Empty when the polygon was accepted with irrational angles.
    std::span<const RationalAngle> angles() const { return angles_; }
    bool is_rational() const { return !angles_.empty(); }
    std::size_t size() const { return vertices_.size(); }
    const Side& side(std::size_t k) const { return sides_[k % sides_.size()]; }

    double perimeter() const { return perimeter_; }
    double diameter() const { return diameter_; }
    double vertex_tolerance() const { return 1e-10 * perimeter_; }
    std::array<Vec2, 2> bounding_box() const { return bbox_; }

    // Crossing-number test; points within tol of the boundary are not inside.
    bool contains(Vec2 p, double tol = 0.0) const;
    double distance_to_boundary(Vec2 p) const;
    // Boundary coordinate of a point lying on the boundary within tol.
    std::optional<BoundaryCoordinate> locate(Vec2 p, double tol) const;
    // True when direction gamma leaves side k into the interior.
    bool points_inward(std::size_t k, double gamma) const;
    // Incidence angle of gamma relative to side k, in (-pi, pi].
    double incidence(std::size_t k, double gamma) const;

private:
    std::vector<Vec2> vertices_;
    std::vector<Side> sides_;
    std::vector<RationalAngle> angles_;
    double perimeter_ = 0.0;
    double diameter_ = 0.0;
    std::array<Vec2, 2> bbox_{};
};

// Validates and builds a polygon. Clockwise input is reordered to counter-clockwise
// keeping the first vertex. If angles are omitted they are detected.
Polygon build_polygon(std::vector<Vec2> vertices,
                      std::optional<std::vector<RationalAngle>> angles = std::nullopt,
                      AnglePolicy policy = AnglePolicy::RequireRational);

std::pair<Vec2, BoundaryCoordinate> boundary_point(const Polygon& poly, double s);

// Specular reflection 2*beta - gamma. Throws GrazingIncidence.
double reflect_direction(double gamma, double beta);
// Direction of the associated skeleton: pi + 2*beta - gamma.
double associated_direction(double gamma, double beta);

struct Chord {
    Vec2 from;
    double gamma = 0.0;
    double length = 0.0;
    Vec2 to;
    int to_side = -1;
    double to_beta = 0.0;  // tangent angle of the side hit at `to`
};

struct BouncePath {
    std::vector<Chord> segments;
    double total_length = 0.0;
    bool terminated_at_vertex = false;
    int start_vertex = -1;
    int end_vertex = -1;
};

// Traces at most max_chords chords. Reflection happens between chords; a chord
// ending within the vertex tolerance of a vertex terminates the path.
BouncePath trace_ray(const Polygon& poly, Vec2 start, double gamma, int max_chords);

// Images of the chord endpoints under the chain of mirror maps that straightens the path.
std::vector<Vec2> unfold_path(const BouncePath& path);

bool integrable_triangle_check(std::span<const RationalAngle, 3> angles);

}  // namespace billiard
