#include "billiard/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "billiard/error.hpp"
#include "billiard/rational.hpp"

namespace billiard {

namespace {

constexpr double grazing_tol = 1e-12;

double interior_angle(Vec2 prev, Vec2 cur, Vec2 next)
{
    // counter-clockwise polygon: interior angle = pi - turning angle
    const Vec2 e1 = cur - prev;
    const Vec2 e2 = next - cur;
    const double turn = std::atan2(cross(e1, e2), dot(e1, e2));
    return std::numbers::pi - turn;
}

double signed_area(std::span<const Vec2> v)
{
    double a = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * a;
}

int orientation(Vec2 a, Vec2 b, Vec2 c, double eps)
{
    const double o = cross(b - a, c - a);
    if (o > eps) return 1;
    if (o < -eps) return -1;
    return 0;
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p, double eps)
{
    return std::min(a.x, b.x) - eps <= p.x && p.x <= std::max(a.x, b.x) + eps &&
           std::min(a.y, b.y) - eps <= p.y && p.y <= std::max(a.y, b.y) + eps;
}

bool segments_touch(Vec2 a, Vec2 b, Vec2 c, Vec2 d, double eps)
{
    const int o1 = orientation(a, b, c, eps), o2 = orientation(a, b, d, eps);
    const int o3 = orientation(c, d, a, eps), o4 = orientation(c, d, b, eps);
    if (o1 != o2 && o3 != o4 && o1 * o2 <= 0 && o3 * o4 <= 0) return true;
    if (o1 == 0 && on_segment(a, b, c, eps)) return true;
    if (o2 == 0 && on_segment(a, b, d, eps)) return true;
    if (o3 == 0 && on_segment(c, d, a, eps)) return true;
    if (o4 == 0 && on_segment(c, d, b, eps)) return true;
    return false;
}

double point_segment_distance(Vec2 p, const Side& s)
{
    const double t = std::clamp(dot(p - s.a, s.tangent), 0.0, s.length);
    return norm(p - (s.a + t * s.tangent));
}

}  // namespace

double wrap_angle(double a)
{
    double r = std::fmod(a, two_pi);
    if (r < 0) r += two_pi;
    if (r >= two_pi) r -= two_pi;
    return r;
}

double angle_diff(double a, double b)
{
    double d = std::remainder(a - b, two_pi);
    if (d <= -std::numbers::pi) d += two_pi;
    return d;
}

std::optional<RationalAngle> detect_rational_angle(double radians)
{
    const auto r = approximate_rational(radians / std::numbers::pi, 64, 1e-9);
    if (!r || r->numerator() <= 0) return std::nullopt;
    return RationalAngle{static_cast<int>(r->numerator()), static_cast<int>(r->denominator())};
}

Polygon::Polygon(std::vector<Vec2> vertices, std::vector<RationalAngle> angles)
    : vertices_(std::move(vertices)), angles_(std::move(angles))
{
    const std::size_t n = vertices_.size();
    sides_.reserve(n);
    double s = 0.0;
    bbox_ = {vertices_[0], vertices_[0]};
    for (std::size_t k = 0; k < n; ++k) {
        Side side;
        side.a = vertices_[k];
        side.b = vertices_[(k + 1) % n];
        side.length = norm(side.b - side.a);
        side.tangent = (1.0 / side.length) * (side.b - side.a);
        side.beta = wrap_angle(std::atan2(side.tangent.y, side.tangent.x));
        side.s0 = s;
        s += side.length;
        sides_.push_back(side);
        bbox_[0] = {std::min(bbox_[0].x, side.a.x), std::min(bbox_[0].y, side.a.y)};
        bbox_[1] = {std::max(bbox_[1].x, side.a.x), std::max(bbox_[1].y, side.a.y)};
        for (std::size_t j = 0; j < k; ++j)
            diameter_ = std::max(diameter_, norm(vertices_[j] - vertices_[k]));
    }
    perimeter_ = s;
}

bool Polygon::contains(Vec2 p, double tol) const
{
    bool in = false;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 a = vertices_[i], b = vertices_[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) in = !in;
        }
    }
    if (!in) return false;
    return distance_to_boundary(p) > tol;
}

double Polygon::distance_to_boundary(Vec2 p) const
{
    double d = std::numeric_limits<double>::infinity();
    for (const Side& s : sides_) d = std::min(d, point_segment_distance(p, s));
    return d;
}

std::optional<BoundaryCoordinate> Polygon::locate(Vec2 p, double tol) const
{
    for (std::size_t k = 0; k < sides_.size(); ++k) {
        const Side& s = sides_[k];
        if (point_segment_distance(p, s) <= tol) {
            double t = std::clamp(dot(p - s.a, s.tangent), 0.0, s.length);
            std::size_t idx = k;
            if (s.length - t <= tol) {
                // at the end vertex: report the side beginning there
                idx = (k + 1) % sides_.size();
                t = 0.0;
            }
            return BoundaryCoordinate{sides_[idx].s0 + t, static_cast<int>(idx), sides_[idx].beta};
        }
    }
    return std::nullopt;
}

bool Polygon::points_inward(std::size_t k, double gamma) const
{
    return std::sin(gamma - side(k).beta) > grazing_tol;
}

double Polygon::incidence(std::size_t k, double gamma) const { return angle_diff(gamma, side(k).beta); }

Polygon build_polygon(std::vector<Vec2> vertices, std::optional<std::vector<RationalAngle>> angles,
                      AnglePolicy policy)
{
    const std::size_t n = vertices.size();
    if (n < 3) fail(ErrorCode::InvalidArgument, "a polygon needs at least 3 vertices");
    for (const Vec2& v : vertices)
        if (!std::isfinite(v.x) || !std::isfinite(v.y))
            fail(ErrorCode::InvalidArgument, "non-finite vertex");
    if (signed_area(vertices) < 0) {
        std::reverse(vertices.begin() + 1, vertices.end());
        if (angles) std::reverse(angles->begin() + 1, angles->end());
    }
    double perimeter = 0.0;
    for (std::size_t k = 0; k < n; ++k) perimeter += norm(vertices[(k + 1) % n] - vertices[k]);
    const double eps = 1e-12 * perimeter * perimeter;
    for (std::size_t k = 0; k < n; ++k) {
        if (norm(vertices[(k + 1) % n] - vertices[k]) <= 1e-12 * perimeter)
            fail(ErrorCode::SelfIntersecting, "zero-length side " + std::to_string(k));
        const Vec2 prev = vertices[(k + n - 1) % n], cur = vertices[k], next = vertices[(k + 1) % n];
        if (orientation(prev, cur, next, eps) == 0 && dot(cur - prev, next - cur) > 0)
            fail(ErrorCode::SelfIntersecting, "collinear vertices at " + std::to_string(k));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
            const Vec2 a = vertices[i], b = vertices[(i + 1) % n];
            const Vec2 c = vertices[j], d = vertices[(j + 1) % n];
            if (adjacent) {
                // adjacent sides may only share their common vertex
                if (orientation(a, b, c, eps) == 0 && orientation(a, b, d, eps) == 0 &&
                    dot(b - a, d - c) < 0)
                    fail(ErrorCode::SelfIntersecting, "sides fold back onto each other");
                continue;
            }
            if (segments_touch(a, b, c, d, eps))
                fail(ErrorCode::SelfIntersecting,
                     "sides " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
        }
    }

    std::vector<double> geometric(n);
    for (std::size_t k = 0; k < n; ++k)
        geometric[k] = interior_angle(vertices[(k + n - 1) % n], vertices[k], vertices[(k + 1) % n]);

    std::vector<RationalAngle> rational;
    if (angles) {
        if (angles->size() != n) fail(ErrorCode::InvalidArgument, "one angle per vertex required");
        int sum_num = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const RationalAngle a = (*angles)[k];
            if (a.p <= 0 || a.q <= 0 || std::gcd(a.p, a.q) != 1 || a.p >= 2 * a.q)
                fail(ErrorCode::InvalidArgument, "angle p/q must be coprime with 0 < p/q < 2");
            if (std::abs(a.radians() - geometric[k]) > 1e-9)
                fail(ErrorCode::AngleMismatch, "declared angle differs at vertex " + std::to_string(k));
            sum_num += 0;
        }
        rational = *angles;
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            const auto a = detect_rational_angle(geometric[k]);
            if (!a) {
                if (policy == AnglePolicy::AllowIrrational) {
                    rational.clear();
                    break;
                }
                fail(ErrorCode::AngleNotRational,
                     "vertex " + std::to_string(k) + " angle is not p*pi/q with q <= 64");
            }
            rational.push_back(*a);
        }
    }
    if (!rational.empty()) {
        Rational total(0);
        for (const RationalAngle& a : rational) total += Rational(a.p, a.q);
        if (total != Rational(static_cast<std::int64_t>(n) - 2))
            fail(ErrorCode::AngleMismatch, "angles do not sum to (n-2)*pi");
    }
    return Polygon(std::move(vertices), std::move(rational));
}

std::pair<Vec2, BoundaryCoordinate> boundary_point(const Polygon& poly, double s)
{
    const double L = poly.perimeter();
    double t = std::fmod(s, L);
    if (t < 0) t += L;
    const auto sides = poly.sides();
    std::size_t k = 0;
    while (k + 1 < sides.size() && t >= sides[k + 1].s0) ++k;
    const Side& side = sides[k];
    const double local = std::min(t - side.s0, side.length);
    return {side.a + local * side.tangent, BoundaryCoordinate{t, static_cast<int>(k), side.beta}};
}

double reflect_direction(double gamma, double beta)
{
    if (std::abs(std::sin(gamma - beta)) < grazing_tol)
        fail(ErrorCode::GrazingIncidence, "direction parallel to the side");
    return wrap_angle(2.0 * beta - gamma);
}

double associated_direction(double gamma, double beta)
{
    return wrap_angle(std::numbers::pi + 2.0 * beta - gamma);
}

BouncePath trace_ray(const Polygon& poly, Vec2 start, double gamma, int max_chords)
{
    BouncePath path;
    const double vtol = poly.vertex_tolerance();
    const double start_tol = 1e-12 * poly.perimeter();
    const auto verts = poly.vertices();
    for (std::size_t v = 0; v < verts.size(); ++v)
        if (norm(verts[v] - start) <= vtol) path.start_vertex = static_cast<int>(v);

    Vec2 p = start;
    double g = wrap_angle(gamma);
    for (int c = 0; c < max_chords; ++c) {
        const Vec2 d = direction(g);
        double best_t = std::numeric_limits<double>::infinity();
        int best_side = -1;
        for (std::size_t k = 0; k < poly.size(); ++k) {
            const Side& s = poly.side(k);
            const Vec2 e = s.b - s.a;
            const double den = cross(d, e);
            if (std::abs(den) < 1e-15 * s.length) continue;
            const Vec2 ap = s.a - p;
            const double t = cross(ap, e) / den;
            const double u = cross(ap, d) / den;
            if (t <= start_tol || u < -1e-12 || u > 1.0 + 1e-12) continue;
            // leaving through this side requires the ray to point outward across it
            if (cross(e, d) > 0) continue;
            if (t < best_t) {
                best_t = t;
                best_side = static_cast<int>(k);
            }
        }
        if (best_side < 0) fail(ErrorCode::NoIntersection, "ray does not meet the boundary");
        Chord chord;
        chord.from = p;
        chord.gamma = g;
        chord.length = best_t;
        chord.to = p + best_t * d;
        chord.to_side = best_side;
        chord.to_beta = poly.side(best_side).beta;
        path.segments.push_back(chord);
        path.total_length += best_t;
        for (std::size_t v = 0; v < verts.size(); ++v) {
            if (norm(verts[v] - chord.to) <= vtol) {
                path.terminated_at_vertex = true;
                path.end_vertex = static_cast<int>(v);
            }
        }
        if (path.terminated_at_vertex) break;
        if (c + 1 == max_chords) break;
        p = chord.to;
        g = reflect_direction(g, chord.to_beta);
    }
    return path;
}

std::vector<Vec2> unfold_path(const BouncePath& path)
{
    std::vector<Vec2> out;
    if (path.segments.empty()) return out;
    // current isometry x -> m*x + t with m a 2x2 matrix
    double m00 = 1, m01 = 0, m10 = 0, m11 = 1;
    Vec2 t{};
    auto apply = [&](Vec2 x) { return Vec2{m00 * x.x + m01 * x.y + t.x, m10 * x.x + m11 * x.y + t.y}; };
    out.push_back(path.segments.front().from);
    for (const Chord& c : path.segments) {
        out.push_back(apply(c.to));
        // compose with the mirror in the line through c.to at angle to_beta
        const double c2 = std::cos(2 * c.to_beta), s2 = std::sin(2 * c.to_beta);
        const Vec2 shift = c.to - Vec2{c2 * c.to.x + s2 * c.to.y, s2 * c.to.x - c2 * c.to.y};
        const double n00 = m00 * c2 + m01 * s2, n01 = m00 * s2 - m01 * c2;
        const double n10 = m10 * c2 + m11 * s2, n11 = m10 * s2 - m11 * c2;
        t = apply(shift);
        m00 = n00;
        m01 = n01;
        m10 = n10;
        m11 = n11;
    }
    return out;
}

bool integrable_triangle_check(std::span<const RationalAngle, 3> angles)
{
    Rational total(0), inverse_sum(0);
    bool unit_numerators = true;
    for (const RationalAngle& a : angles) {
        if (a.p <= 0 || a.q <= 0) fail(ErrorCode::InvalidArgument, "angles must be positive");
        total += Rational(a.p, a.q);
        inverse_sum += Rational(1, a.q);
        unit_numerators = unit_numerators && a.p == 1;
    }
    if (total != Rational(1)) fail(ErrorCode::AnglesDontSumToPi, "triangle angles must sum to pi");
    return unit_numerators && inverse_sum == Rational(1);
}

}  // namespace billiard
