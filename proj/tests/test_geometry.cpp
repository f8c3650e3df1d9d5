#include <doctest.h>

#include <cmath>
#include <numbers>

#include "billiard/error.hpp"
#include "billiard/geometry.hpp"
#include "billiard/rational.hpp"

using namespace billiard;
using std::numbers::pi;

namespace {

Polygon unit_square() { return build_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

ErrorCode code_of(auto&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Ok;
}

}  // namespace

TEST_CASE("L-shape has five right angles and one reflex angle")
{
    const Polygon L = build_polygon({{0, 0}, {2, 0}, {2, 0.5}, {1, 0.5}, {1, 1}, {0, 1}});
    REQUIRE(L.size() == 6);
    int right = 0, reflex = 0;
    for (const RationalAngle& a : L.angles()) {
        if (a == RationalAngle{1, 2}) ++right;
        if (a == RationalAngle{3, 2}) ++reflex;
    }
    CHECK(right == 5);
    CHECK(reflex == 1);
    CHECK(L.perimeter() == doctest::Approx(6.0));
}

TEST_CASE("clockwise input is reordered and keeps the first vertex")
{
    const Polygon p = build_polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
    CHECK(p.vertices()[0] == Vec2{0, 0});
    CHECK(p.vertices()[1] == Vec2{1, 0});
    // interior is on the left of every side
    for (const Side& s : p.sides()) {
        const Vec2 mid = 0.5 * (s.a + s.b);
        const Vec2 left{-s.tangent.y, s.tangent.x};
        CHECK(p.contains(mid + 1e-3 * left));
    }
}

TEST_CASE("invalid polygons are rejected")
{
    CHECK(code_of([] { build_polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}); }) == ErrorCode::SelfIntersecting);
    CHECK(code_of([] { build_polygon({{0, 0}, {1, 0}, {2, 0}, {0, 1}}); }) == ErrorCode::SelfIntersecting);
    CHECK(code_of([] { build_polygon({{0, 0}, {1, 0}, {0.3, 0.9}}); }) == ErrorCode::AngleNotRational);
    CHECK(code_of([] { build_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, std::vector<RationalAngle>{{1, 2}, {1, 2}, {1, 2}, {1, 3}}); }) ==
          ErrorCode::AngleMismatch);
    const Polygon irr = build_polygon({{0, 0}, {1, 0}, {0.3, 0.9}}, std::nullopt, AnglePolicy::AllowIrrational);
    CHECK_FALSE(irr.is_rational());
}

TEST_CASE("ray from near a corner runs along the diagonal")
{
    const Polygon sq = unit_square();
    const double eps = 1e-7;
    const BouncePath path = trace_ray(sq, {eps, 0.0}, pi / 4, 3);
    REQUIRE(!path.segments.empty());
    const Chord& c = path.segments.front();
    CHECK(c.to.x == doctest::Approx(1.0));
    CHECK(c.to.y == doctest::Approx(1.0 - eps).epsilon(1e-12));
    CHECK_FALSE(path.terminated_at_vertex);

    const BouncePath corner = trace_ray(sq, {0.0, 0.0}, pi / 4, 3);
    REQUIRE(corner.segments.size() == 1);
    CHECK(corner.terminated_at_vertex);
    CHECK(corner.segments[0].length == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("reflection mirrors the direction vector in the side")
{
    for (double beta : {0.0, 0.4, pi / 2, 2.0}) {
        for (double gamma : {0.3, 1.1, 2.5, 4.0}) {
            if (std::abs(std::sin(gamma - beta)) < 1e-3) continue;
            const Vec2 d = direction(gamma), t = direction(beta);
            const Vec2 mirrored = 2.0 * dot(d, t) * t - d;
            const Vec2 got = direction(reflect_direction(gamma, beta));
            CHECK(got.x == doctest::Approx(mirrored.x));
            CHECK(got.y == doctest::Approx(mirrored.y));
        }
    }
    CHECK_THROWS_AS(reflect_direction(0.5, 0.5), Error);
}

TEST_CASE("unfolded path is a straight line")
{
    const Polygon tri = build_polygon({{0, 0}, {3, 0}, {1.5, 1.5 * std::sqrt(3.0)}});
    const BouncePath path = trace_ray(tri, {0.7, 0.0}, 1.0, 12);
    const auto pts = unfold_path(path);
    REQUIRE(pts.size() >= 3);
    const Vec2 d = pts.back() - pts.front();
    double worst = 0.0;
    for (const Vec2& p : pts) worst = std::max(worst, std::abs(cross(d, p - pts.front())) / norm(d));
    CHECK(worst <= 1e-10 * path.total_length);
    CHECK(norm(d) == doctest::Approx(path.total_length));
}

TEST_CASE("continued fractions")
{
    const auto r = approximate_rational(0.75, 100, 1e-13);
    REQUIRE(r);
    CHECK(*r == Rational(3, 4));
    CHECK_FALSE(approximate_rational(std::sqrt(2.0), 1000000, 1e-13 * std::sqrt(2.0)));
    const auto third = approximate_rational(1.0 / 3.0, 1000000, 1e-13);
    REQUIRE(third);
    CHECK(*third == Rational(1, 3));
}

TEST_CASE("linear diophantine solutions satisfy the equation")
{
    for (std::int64_t a : {1, 2, 3, 5, 7}) {
        for (std::int64_t b : {1, 2, 4, 9}) {
            if (gcd64(a, b) != 1) continue;
            for (std::int64_t c = -6; c <= 6; ++c) {
                const auto [x, y] = solve_linear_diophantine(a, b, c);
                CHECK(a * x - b * y == c);
            }
        }
    }
    CHECK_THROWS_AS(solve_linear_diophantine(2, 4, 1), Error);
}

TEST_CASE("integrable triangles")
{
    const std::array<RationalAngle, 3> equilateral{{{1, 3}, {1, 3}, {1, 3}}};
    const std::array<RationalAngle, 3> half_square{{{1, 2}, {1, 4}, {1, 4}}};
    const std::array<RationalAngle, 3> other{{{1, 2}, {1, 5}, {3, 10}}};
    CHECK(integrable_triangle_check(equilateral));
    CHECK(integrable_triangle_check(half_square));
    CHECK_FALSE(integrable_triangle_check(other));
}
