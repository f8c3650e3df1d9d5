#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "billiard/error.hpp"
#include "billiard/presets.hpp"
#include "billiard/refsolver.hpp"

using namespace billiard;
using std::numbers::pi;

TEST_CASE("rasterize counts interior nodes")
{
    const GridMask m = rasterize(rectangle_polygon(1, 1), 0.25);
    CHECK(m.unknowns == 9);
    CHECK_THROWS_AS(rasterize(rectangle_polygon(1, 1), 0.5), Error);

    const GridMask l = rasterize(broken_rectangle(2, 0.5, 1, 1), 0.05);
    for (int iy = 0; iy < l.ny; ++iy)
        for (int ix = 0; ix < l.nx; ++ix) {
            const Vec2 p = l.node(ix, iy);
            if (p.x > 1.0 + 1e-9 && p.y > 0.5 + 1e-9) CHECK(l.index[static_cast<std::size_t>(iy * l.nx + ix)] == -1);
        }
}

TEST_CASE("assembled matrix is the symmetric 5-point stencil")
{
    // a single interior node at h = 1
    GridMask tiny;
    tiny.h = 1.0;
    tiny.nx = tiny.ny = 3;
    tiny.inside.assign(9, 0);
    tiny.index.assign(9, -1);
    tiny.inside[4] = 1;
    tiny.index[4] = 0;
    tiny.unknowns = 1;
    const SparseSymmetric A1 = assemble(tiny);
    REQUIRE(A1.dimension == 1);
    CHECK(A1.at(0, 0) == 2.0);

    const SparseSymmetric A = assemble(rasterize(broken_rectangle(2, 0.5, 1, 1), 0.1));
    for (int r = 0; r < A.dimension; ++r)
        for (int j = A.row_start[static_cast<std::size_t>(r)]; j < A.row_start[static_cast<std::size_t>(r) + 1]; ++j)
            CHECK(A.at(A.column[static_cast<std::size_t>(j)], r) == A.value[static_cast<std::size_t>(j)]);
}

TEST_CASE("square grid eigenvalues match the separable discrete spectrum")
{
    const double h = 0.25;
    const GridMask m = rasterize(rectangle_polygon(1, 1), h);
    const auto pairs = lowest_eigenpairs(assemble(m), 9, h);
    std::vector<double> expect;
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) expect.push_back((2 - std::cos(i * pi * h) - std::cos(j * pi * h)) / (h * h));
    std::sort(expect.begin(), expect.end());
    REQUIRE(pairs.size() == 9);
    for (std::size_t i = 0; i < 9; ++i) CHECK(pairs[i].value == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("iterative solver on the fine square")
{
    const double h = 1.0 / 200;
    const GridMask m = rasterize(rectangle_polygon(1, 1), h);
    const SparseSymmetric A = assemble(m);
    const auto pairs = lowest_eigenpairs(A, 5, h);
    CHECK(pairs[0].value == doctest::Approx(pi * pi).epsilon(1e-3));
    CHECK(pairs[1].value == doctest::Approx(2.5 * pi * pi).epsilon(1e-3));
    CHECK(pairs[2].value == doctest::Approx(2.5 * pi * pi).epsilon(1e-3));
    for (const EigenPair& p : pairs) CHECK(p.residual <= 1e-8 * p.value);
    for (std::size_t i = 0; i < pairs.size(); ++i)
        for (std::size_t j = 0; j < pairs.size(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < pairs[i].vector.size(); ++k) s += pairs[i].vector[k] * pairs[j].vector[k] * h * h;
            CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) < 1e-8);
        }
    const auto again = lowest_eigenpairs(A, 5, h);
    for (std::size_t i = 0; i < pairs.size(); ++i) CHECK(again[i].value == pairs[i].value);
}

TEST_CASE("removing the bay raises the ground state")
{
    const double h = 1.0 / 40;
    const auto full = lowest_eigenpairs(assemble(rasterize(rectangle_polygon(2, 1), h)), 1, h);
    const auto ell = lowest_eigenpairs(assemble(rasterize(broken_rectangle(2, 0.5, 1, 1), h)), 1, h);
    CHECK(full[0].value <= ell[0].value);
}

TEST_CASE("greedy spectrum matching")
{
    std::vector<SpectrumEntry> sc(3);
    sc[0].E = 1.0, sc[1].E = 2.0, sc[2].E = 5.0;
    std::vector<EigenPair> num(3);
    num[0].value = 1.001, num[1].value = 1.999, num[2].value = 3.0;
    const MatchReport r = spectrum_match(sc, num, 0.01);
    REQUIRE(r.matched.size() == 2);
    CHECK(r.matched[0].numeric == 0);
    CHECK(r.matched[1].numeric == 1);
    CHECK(r.unmatched_semiclassical == std::vector<int>{2});
    CHECK(r.unmatched_numeric == std::vector<int>{2});
    CHECK(spectrum_match({}, num, 0.01).matched.empty());
}

TEST_CASE("overlap of a mode with itself")
{
    const double h = 1.0 / 30;
    const Polygon sq = rectangle_polygon(1, 1);
    const GridMask m = rasterize(sq, h);
    const auto pairs = lowest_eigenpairs(assemble(m), 6, h);
    FieldGenerator g = rect_generic_field(1, 1, 1, 1);
    // the discrete ground state on this grid is the sampled sine product
    const OverlapReport r = scar_overlap(field_on_mask(g, m), m, pairs);
    CHECK(r.overlap[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.participation == 1);
    CHECK(r.total <= 1.0 + 1e-10);

    Wavefield shifted = field_on_mask(g, m);
    shifted.grid.x0 += 0.5 * h;
    CHECK_THROWS_AS(scar_overlap(shifted, m, pairs), Error);
}

TEST_CASE("a complete basis captures everything")
{
    const double h = 0.1;
    const GridMask m = rasterize(broken_rectangle(2, 0.5, 1, 1), h);
    const SparseSymmetric A = assemble(m);
    const auto pairs = lowest_eigenpairs(A, A.dimension, h);
    const OverlapReport r = scar_overlap(field_on_mask(lshape_superscar({}, 1, 2, Variant::Plus), m), m, pairs);
    CHECK(r.total == doctest::Approx(1.0).epsilon(1e-10));
}
