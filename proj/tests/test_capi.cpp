#include <doctest.h>

#include <billiard/billiard_c.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <string>
#include <vector>

using std::numbers::pi;

TEST_CASE("status names and errors")
{
    CHECK(std::string(bl_status_name(BL_OK)) == "Ok");
    CHECK(std::string(bl_status_name(BL_PARITY_VIOLATION)) == "ParityViolation");
    bl_polygon* p = nullptr;
    CHECK(bl_polygon_preset("nonsense", nullptr, 0, &p) == BL_INVALID_ARGUMENT);
    CHECK(std::strlen(bl_last_error()) > 0);
    CHECK(p == nullptr);
    CHECK(bl_polygon_size(nullptr, nullptr) == BL_INVALID_ARGUMENT);
}

TEST_CASE("polygon round trip")
{
    const double xy[] = {0, 0, 2, 0, 2, 1, 0, 1};
    bl_polygon* p = nullptr;
    REQUIRE(bl_polygon_create(xy, 4, 0, &p) == BL_OK);
    size_t n = 0;
    CHECK(bl_polygon_size(p, &n) == BL_OK);
    CHECK(n == 4);
    double out[8];
    CHECK(bl_polygon_vertices(p, out, 4) == BL_OK);
    CHECK(out[4] == 2.0);
    CHECK(bl_polygon_vertices(p, out, 2) == BL_INVALID_ARGUMENT);
    int g = 0;
    CHECK(bl_genus(p, 0.3, &g) == BL_OK);
    CHECK(g == 1);
    size_t len = 0;
    CHECK(bl_skeleton_report(p, 0.3, nullptr, 0, &len) == BL_OK);
    std::string buf(len + 1, '\0');
    CHECK(bl_skeleton_report(p, 0.3, buf.data(), buf.size(), &len) == BL_OK);
    CHECK(buf.find("RegularGlobal") != std::string::npos);
    bl_polygon_destroy(p);

    const double bow[] = {0, 0, 1, 1, 1, 0, 0, 1};
    CHECK(bl_polygon_create(bow, 4, 0, &p) == BL_SELF_INTERSECTING);
}

TEST_CASE("spectra through the C interface")
{
    const double ab[] = {1, 1};
    bl_level lv{};
    REQUIRE(bl_spectrum("rect_generic", ab, 2, 1, 1, &lv) == BL_OK);
    CHECK(lv.E == doctest::Approx(pi * pi));
    CHECK(std::string(lv.kind) == "RectGeneric");
    CHECK(bl_spectrum("pentagon_gallery", nullptr, 0, 1, 2, &lv) == BL_PARITY_VIOLATION);
    CHECK(bl_spectrum("rect_generic", ab, 1, 1, 1, &lv) == BL_INVALID_ARGUMENT);

    bl_polygon* p = nullptr;
    REQUIRE(bl_polygon_preset("figure17", nullptr, 0, &p) == BL_OK);
    bl_preset_info info{};
    REQUIRE(bl_polygon_preset_info(p, &info) == BL_OK);
    REQUIRE(info.has_seed);
    bl_channel* ch = nullptr;
    REQUIRE(bl_channel_trace(p, info.direction, info.seed_side, info.seed_offset, &ch) == BL_OK);
    bl_channel_info ci{};
    CHECK(bl_channel_info_get(ch, &ci) == BL_OK);
    CHECK(ci.D_half == doctest::Approx(info.half_period).epsilon(1e-9));
    bl_level a{}, b{};
    CHECK(bl_channel_level(ch, 1, 1, &a) == BL_OK);
    CHECK(bl_spectrum("pentagon_star", nullptr, 0, 1, 1, &b) == BL_OK);
    CHECK(a.E == doctest::Approx(b.E).epsilon(1e-12));
    bl_channel_destroy(ch);
    bl_polygon_destroy(p);
}

TEST_CASE("fields and modes")
{
    const double ab[] = {1, 1};
    bl_field* f = nullptr;
    REQUIRE(bl_field_create("rect_generic", ab, 2, 1, 1, BL_PLUS, &f) == BL_OK);
    double re = 0, im = 1;
    CHECK(bl_field_eval(f, 0.5, 0.5, &re, &im) == BL_OK);
    CHECK(re == doctest::Approx(-4.0));
    CHECK(im == 0.0);
    CHECK(bl_field_eval(f, 2.0, 0.5, &re, &im) == BL_OUTSIDE_DOMAIN);
    double br = 1, hr = 1;
    CHECK(bl_field_residuals(f, 64, 100, 3, &br, &hr) == BL_OK);
    CHECK(br < 1e-13);
    CHECK(hr < 1e-5);

    bl_polygon* p = nullptr;
    REQUIRE(bl_polygon_preset("rectangle", ab, 2, &p) == BL_OK);
    bl_modes* m = nullptr;
    REQUIRE(bl_modes_solve(p, 1.0 / 40, 3, 7, &m) == BL_OK);
    int count = 0;
    CHECK(bl_modes_count(m, &count) == BL_OK);
    CHECK(count == 3);
    double E = 0;
    CHECK(bl_modes_value(m, 0, &E, nullptr) == BL_OK);
    CHECK(E == doctest::Approx(pi * pi).epsilon(1e-2));
    std::vector<double> ov(3);
    int part = 0, dom = -1;
    double total = 0;
    CHECK(bl_modes_overlap(m, f, ov.data(), &part, &dom, &total) == BL_OK);
    CHECK(dom == 0);
    CHECK(ov[0] > 0.99);
    const double energies[] = {pi * pi, 1000.0};
    int idx[2];
    double err[2];
    CHECK(bl_modes_match(m, energies, 2, 0.01, idx, err) == BL_OK);
    CHECK(idx[0] == 0);
    CHECK(idx[1] == -1);
    CHECK(bl_modes_solve(p, 0.5, 3, 7, &m) == BL_GRID_TOO_COARSE);
    bl_modes_destroy(m);
    bl_field_destroy(f);
    bl_polygon_destroy(p);
}
