#include <doctest.h>

#include <cmath>
#include <numbers>

#include "billiard/error.hpp"
#include "billiard/presets.hpp"
#include "billiard/skeleton.hpp"

using namespace billiard;
using std::numbers::pi;

TEST_CASE("generic rectangle direction: torus from eight bundles")
{
    const Polygon rect = rectangle_polygon(2, 1);
    const Skeleton s = build_skeleton(rect, 0.3);
    CHECK(s.directions.size() == 4);
    CHECK(s.bundles.size() == 8);
    CHECK(s.reduced_bundles.size() == 4);
    const SkeletonClass c = classify(s);
    CHECK(c.kind == SkeletonKind::RegularGlobal);
    CHECK(c.surface == SurfaceKind::Torus);
    REQUIRE(c.genus);
    CHECK(*c.genus == 1);
}

TEST_CASE("square diagonal is a periodic cylinder")
{
    const Skeleton s = build_skeleton(rectangle_polygon(1, 1), pi / 4);
    CHECK(s.bundles.size() == 4);
    const SkeletonClass c = classify(s);
    CHECK(c.kind == SkeletonKind::SingularPeriodic);
    CHECK(c.surface == SurfaceKind::CylinderLike);
}

TEST_CASE("genus from the angle formula")
{
    // g = 1 + N/4 * sum (p - 1)/q, worked by hand for each shape
    CHECK(genus(rectangle_polygon(1, 2), 4) == 1);
    CHECK(genus(broken_rectangle(2, 0.5, 1, 1), 4) == 2);
    CHECK(genus(equilateral_triangle(3), 6) == 1);
    const Skeleton ls = build_skeleton(broken_rectangle(2, 0.5, 1, 1), 0.3);
    const SkeletonClass c = classify(ls);
    REQUIRE(c.genus);
    CHECK(*c.genus == 2);
}

TEST_CASE("regular pentagon gallery direction")
{
    const Preset p = make_preset("figure16");
    const Skeleton s = build_skeleton(p.polygon, *p.direction);
    CHECK(s.bundles.size() == 5);
    CHECK(classify(s).surface == SurfaceKind::MoebiusLike);
    const PeriodicChannel ch = channel_from_direction(p.polygon, *p.direction, p.seed);
    CHECK(ch.D == doctest::Approx(10 * std::cos(pi / 5)).epsilon(1e-12));
    CHECK(ch.moebius);
    CHECK(ch.n_bundles == 5);
}

TEST_CASE("singular diagonals of the square")
{
    const auto sds = find_singular_diagonals(rectangle_polygon(1, 1), pi / 4, 100);
    REQUIRE(sds.size() == 2);
    for (const BouncePath& sd : sds) CHECK(sd.total_length == doctest::Approx(std::sqrt(2.0)));
    CHECK(find_singular_diagonals(rectangle_polygon(1, 1), std::atan(std::sqrt(2.0)), 200).empty());
}

TEST_CASE("rectangle channel geometry")
{
    const PeriodicChannel ch = rect_channel(1, 1, 1, 1);
    CHECK(ch.D_half == doctest::Approx(std::sqrt(2.0)));
    CHECK(ch.w == doctest::Approx(std::sqrt(2.0) / 2));
    CHECK(ch.n_bundles == 4);
    CHECK_THROWS_AS(rect_channel(1, 1, 2, 4), Error);

    // a traced channel in the same direction agrees with the closed form
    const PeriodicChannel traced = channel_from_direction(rectangle_polygon(1.5, 1), std::atan2(2 * 1.0, 1 * 1.5));
    const PeriodicChannel closed = rect_channel(1.5, 1, 2, 1);
    CHECK(traced.D_half == doctest::Approx(closed.D_half));
    CHECK(traced.w == doctest::Approx(closed.w));
}

TEST_CASE("delta is constant along regular bundles")
{
    const Polygon tri = equilateral_triangle(3);
    const Skeleton s = build_skeleton(tri, 0.4);
    for (const Bundle& b : s.bundles)
        for (const Bundle& piece : regular_pieces(tri, b)) {
            const DeltaCheck d = delta_constancy_check(tri, piece, 16);
            CHECK(d.pass);
            CHECK(d.max_deviation < 1e-10);
        }
}

TEST_CASE("aperiodic direction is rejected for channels")
{
    CHECK_THROWS_AS(channel_from_direction(rectangle_polygon(1, 1), std::atan(std::sqrt(2.0))), Error);
}
