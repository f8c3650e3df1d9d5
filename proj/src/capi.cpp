#include "billiard/billiard_c.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <random>
#include <string>
#include <string_view>

#include <json.hpp>

#include "billiard/error.hpp"
#include "billiard/parallel.hpp"
#include "billiard/presets.hpp"
#include "billiard/refsolver.hpp"
#include "billiard/skeleton.hpp"
#include "billiard/swf.hpp"

using namespace billiard;

struct bl_polygon {
    Preset preset;
};

struct bl_channel {
    Polygon polygon;
    PeriodicChannel channel;
};

struct bl_field {
    FieldGenerator gen;
};

struct bl_modes {
    GridMask mask;
    std::vector<EigenPair> pairs;
};

static_assert(static_cast<int>(ErrorCode::Internal) == BL_INTERNAL);
static_assert(static_cast<int>(ErrorCode::GridTooCoarse) == BL_GRID_TOO_COARSE);
static_assert(static_cast<int>(ErrorCode::ParityViolation) == BL_PARITY_VIOLATION);

namespace {

thread_local std::string last_error;

template <class F>
bl_status guard(F&& body) noexcept
{
    try {
        body();
        last_error.clear();
        return BL_OK;
    } catch (const Error& e) {
        last_error = e.what();
        return static_cast<bl_status>(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
    } catch (const std::exception& e) {
        last_error = e.what();
    } catch (...) {
        last_error = "unknown failure";
    }
    return BL_INTERNAL;
}

template <class T>
void require(const T* p, const char* what)
{
    if (p == nullptr) fail(ErrorCode::InvalidArgument, std::string(what) + " is null");
}

std::span<const double> param_span(const double* params, std::size_t count)
{
    if (count > 0) require(params, "params");
    return {params, count};
}

void need(std::span<const double> p, std::size_t count, std::string_view kind)
{
    if (p.size() != count)
        fail(ErrorCode::InvalidArgument, std::string(kind) + " takes " + std::to_string(count) + " parameters");
}

int as_int(double v, const char* what)
{
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9 || std::abs(r) > 1e9) fail(ErrorCode::InvalidArgument, std::string(what) + " must be an integer");
    return static_cast<int>(r);
}

LShapeGeometry lshape_from(std::span<const double> p)
{
    return {p[0], p[1], p[2], p[3]};
}

std::optional<PentagonFamily> pentagon_family(std::string_view kind)
{
    if (kind == "pentagon_gallery") return PentagonFamily::Gallery;
    if (kind == "pentagon_star") return PentagonFamily::Star;
    if (kind == "deformed_wide") return PentagonFamily::DeformedWide;
    if (kind == "deformed_narrow") return PentagonFamily::DeformedNarrow;
    return std::nullopt;
}

SpectrumEntry spectrum_entry(std::string_view kind, std::span<const double> p, int m, int n)
{
    if (kind == "rect_generic") return need(p, 2, kind), rect_generic_spectrum(p[0], p[1], m, n);
    if (kind == "rect_bouncing") return need(p, 2, kind), rect_bouncing_spectrum(p[0], p[1], m, n);
    if (kind == "rect_channel")
        return need(p, 4, kind), rect_channel_spectrum(p[0], p[1], as_int(p[2], "p"), as_int(p[3], "q"), m, n);
    if (kind == "channel") return need(p, 2, kind), channel_spectrum(p[0], p[1], m, n);
    if (kind == "degenerate")
        return need(p, 4, kind), rect_degenerate_regular(p[0], p[1], as_int(p[2], "p"), as_int(p[3], "q"), m, n).entry;
    if (kind == "broken") return need(p, 4, kind), broken_rect_bouncing(p[0], p[1], p[2], p[3], m, n).entry;
    if (kind == "superscar") return need(p, 4, kind), lshape_superscar_spectrum(lshape_from(p), m, n);
    if (kind == "triangle_regular") return need(p, 1, kind), triangle_regular_spectrum(m, n, p[0]);
    if (kind == "triangle_singular") return need(p, 1, kind), triangle_singular_spectrum(m, n, p[0]);
    if (const auto fam = pentagon_family(kind)) return need(p, 0, kind), pentagon_spectrum(*fam, m, n);
    fail(ErrorCode::InvalidArgument, "unknown spectrum kind " + std::string(kind));
}

void fill_level(const SpectrumEntry& e, bl_level* out)
{
    std::memset(out->kind, 0, sizeof out->kind);
    std::strncpy(out->kind, to_string(e.kind), sizeof out->kind - 1);
    out->m = e.m;
    out->n = e.n;
    out->E = e.E;
    out->degeneracy = e.degeneracy;
}

Variant to_variant(bl_variant v)
{
    switch (v) {
    case BL_PLUS: return Variant::Plus;
    case BL_MINUS: return Variant::Minus;
    case BL_RUNNING: return Variant::Running;
    }
    fail(ErrorCode::InvalidArgument, "unknown variant");
}

FieldGenerator make_field(std::string_view kind, std::span<const double> p, int m, int n, bl_variant variant)
{
    if (kind == "rect_generic") return need(p, 2, kind), rect_generic_field(p[0], p[1], m, n);
    if (kind == "rect_bouncing") return need(p, 2, kind), rect_bouncing_field(p[0], p[1], m, n);
    if (kind == "rect_channel")
        return need(p, 4, kind), rect_channel_field(p[0], p[1], as_int(p[2], "p"), as_int(p[3], "q"), m, n, to_variant(variant));
    if (kind == "degenerate") {
        need(p, 4, kind);
        auto d = rect_degenerate_regular(p[0], p[1], as_int(p[2], "p"), as_int(p[3], "q"), m, n);
        return variant == BL_PLUS ? d.phi1 : d.phi2;
    }
    if (kind == "broken") return need(p, 4, kind), broken_rect_bouncing(p[0], p[1], p[2], p[3], m, n).field;
    if (kind == "superscar") return need(p, 4, kind), lshape_superscar(lshape_from(p), m, n, to_variant(variant));
    if (kind == "triangle_regular")
        return need(p, 1, kind), triangle_regular_field(m, n, variant == BL_PLUS ? 1 : 2, p[0]);
    if (kind == "triangle_singular") return need(p, 1, kind), triangle_singular_field(m, n, p[0]);
    fail(ErrorCode::InvalidArgument, "unknown field kind " + std::string(kind));
}

nlohmann::json skeleton_json(const Preset& preset, double gamma)
{
    const Polygon& poly = preset.polygon;
    const Skeleton skel = build_skeleton(poly, gamma);
    const SkeletonClass cls = classify(skel);
    nlohmann::json j;
    j["directions"] = skel.directions;
    j["bundles"] = nlohmann::json::array();
    for (const Bundle& b : skel.bundles)
        j["bundles"].push_back({{"side", b.side_index}, {"u", b.u}, {"l", b.l}, {"gamma", b.gamma}});
    j["compound_bundles"] = skel.reduced_bundles.size();
    j["rounds"] = skel.rounds;
    j["class"] = {{"kind", to_string(cls.kind)}, {"surface", to_string(cls.surface)}, {"diagnostics", cls.diagnostics}};
    j["genus"] = cls.genus ? nlohmann::json(*cls.genus) : nlohmann::json(nullptr);
    j["channel"] = nullptr;
    if (cls.kind == SkeletonKind::SingularPeriodic) {
        std::optional<ChannelSeed> seed;
        if (preset.direction && std::abs(angle_diff(*preset.direction, gamma)) < 1e-12) seed = preset.seed;
        const PeriodicChannel ch = channel_from_direction(poly, gamma, seed);
        j["channel"] = {{"D", ch.D}, {"D_half", ch.D_half}, {"w", ch.w}, {"n_bundles", ch.n_bundles}, {"moebius", ch.moebius},
                        {"reflections", ch.reflections}};
    }
    return j;
}

}  // namespace

extern "C" {

const char* bl_status_name(bl_status status)
{
    if (status < BL_OK || status > BL_INTERNAL) return "Unknown";
    return error_name(static_cast<ErrorCode>(status));
}

const char* bl_last_error(void) { return last_error.c_str(); }

bl_status bl_set_threads(unsigned count)
{
    return guard([&] { set_max_threads(count); });
}

bl_status bl_polygon_create(const double* xy, size_t count, int allow_irrational, bl_polygon** out)
{
    return guard([&] {
        require(xy, "xy");
        require(out, "out");
        std::vector<Vec2> v(count);
        for (std::size_t i = 0; i < count; ++i) v[i] = {xy[2 * i], xy[2 * i + 1]};
        auto p = std::make_unique<bl_polygon>();
        p->preset.name = "custom";
        p->preset.polygon = build_polygon(std::move(v), std::nullopt,
                                          allow_irrational ? AnglePolicy::AllowIrrational : AnglePolicy::RequireRational);
        *out = p.release();
    });
}

bl_status bl_polygon_preset(const char* name, const double* params, size_t count, bl_polygon** out)
{
    return guard([&] {
        require(name, "name");
        require(out, "out");
        auto p = std::make_unique<bl_polygon>();
        p->preset = make_preset(name, param_span(params, count));
        *out = p.release();
    });
}

void bl_polygon_destroy(bl_polygon* poly) { delete poly; }

bl_status bl_polygon_size(const bl_polygon* poly, size_t* count)
{
    return guard([&] {
        require(poly, "poly");
        require(count, "count");
        *count = poly->preset.polygon.size();
    });
}

bl_status bl_polygon_vertices(const bl_polygon* poly, double* xy, size_t capacity)
{
    return guard([&] {
        require(poly, "poly");
        require(xy, "xy");
        const auto v = poly->preset.polygon.vertices();
        if (capacity < v.size()) fail(ErrorCode::InvalidArgument, "vertex buffer too small");
        for (std::size_t i = 0; i < v.size(); ++i) xy[2 * i] = v[i].x, xy[2 * i + 1] = v[i].y;
    });
}

bl_status bl_polygon_bounds(const bl_polygon* poly, double box[4])
{
    return guard([&] {
        require(poly, "poly");
        require(box, "box");
        const auto [lo, hi] = poly->preset.polygon.bounding_box();
        box[0] = lo.x, box[1] = lo.y, box[2] = hi.x, box[3] = hi.y;
    });
}

bl_status bl_polygon_preset_info(const bl_polygon* poly, bl_preset_info* info)
{
    return guard([&] {
        require(poly, "poly");
        require(info, "info");
        const Preset& p = poly->preset;
        *info = bl_preset_info{};
        if (p.direction) info->has_direction = 1, info->direction = *p.direction;
        if (p.seed) info->has_seed = 1, info->seed_side = p.seed->side, info->seed_offset = p.seed->offset;
        if (p.half_period) info->has_half_period = 1, info->half_period = *p.half_period;
        if (p.lshape) {
            info->has_lshape = 1;
            info->lshape[0] = p.lshape->width, info->lshape[1] = p.lshape->strip;
            info->lshape[2] = p.lshape->column, info->lshape[3] = p.lshape->height;
        }
    });
}

bl_status bl_skeleton_report(const bl_polygon* poly, double gamma, char* buffer, size_t capacity, size_t* length)
{
    return guard([&] {
        require(poly, "poly");
        const std::string text = skeleton_json(poly->preset, gamma).dump(2);
        if (length) *length = text.size();
        if (buffer == nullptr) return;
        if (capacity <= text.size()) fail(ErrorCode::InvalidArgument, "report buffer too small");
        std::memcpy(buffer, text.c_str(), text.size() + 1);
    });
}

bl_status bl_genus(const bl_polygon* poly, double gamma, int* g)
{
    return guard([&] {
        require(poly, "poly");
        require(g, "genus");
        const Skeleton skel = build_skeleton(poly->preset.polygon, gamma);
        *g = genus(poly->preset.polygon, static_cast<int>(skel.reduced_bundles.size()));
    });
}

bl_status bl_delta_check(const bl_polygon* poly, double gamma, int bundles, uint64_t seed, double* max_deviation,
                         int* checked)
{
    return guard([&] {
        require(poly, "poly");
        require(max_deviation, "max_deviation");
        if (bundles < 1) fail(ErrorCode::InvalidArgument, "need at least one bundle");
        const Polygon& P = poly->preset.polygon;
        const Skeleton skel = build_skeleton(P, gamma);
        std::vector<Bundle> pieces;
        for (const Bundle& b : skel.bundles)
            for (const Bundle& piece : regular_pieces(P, b)) pieces.push_back(piece);
        if (pieces.empty()) fail(ErrorCode::Internal, "skeleton has no bundles");
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
        double worst = 0.0;
        for (int i = 0; i < bundles; ++i)
            worst = std::max(worst, delta_constancy_check(P, pieces[pick(rng)], 32).max_deviation);
        *max_deviation = worst;
        if (checked) *checked = bundles;
    });
}

bl_status bl_channel_trace(const bl_polygon* poly, double gamma, int seed_side, double seed_offset, bl_channel** out)
{
    return guard([&] {
        require(poly, "poly");
        require(out, "out");
        std::optional<ChannelSeed> seed;
        if (seed_side >= 0) seed = ChannelSeed{seed_side, seed_offset};
        auto c = std::make_unique<bl_channel>();
        c->polygon = poly->preset.polygon;
        c->channel = channel_from_direction(c->polygon, gamma, seed);
        *out = c.release();
    });
}

bl_status bl_channel_rect(double a, double b, int p, int q, bl_channel** out)
{
    return guard([&] {
        require(out, "out");
        auto c = std::make_unique<bl_channel>();
        c->channel = rect_channel(a, b, p, q);
        c->polygon = rectangle_polygon(a, b);
        *out = c.release();
    });
}

bl_status bl_channel_info_get(const bl_channel* ch, bl_channel_info* info)
{
    return guard([&] {
        require(ch, "channel");
        require(info, "info");
        const PeriodicChannel& c = ch->channel;
        *info = {c.D, c.D_half, c.w, c.direction, c.n_bundles, c.reflections, c.moebius ? 1 : 0, c.ref_side};
    });
}

void bl_channel_destroy(bl_channel* ch) { delete ch; }

bl_status bl_spectrum(const char* kind, const double* params, size_t count, int m, int n, bl_level* out)
{
    return guard([&] {
        require(kind, "kind");
        require(out, "out");
        fill_level(spectrum_entry(kind, param_span(params, count), m, n), out);
    });
}

bl_status bl_channel_level(const bl_channel* ch, int m, int n, bl_level* out)
{
    return guard([&] {
        require(ch, "channel");
        require(out, "out");
        if (ch->channel.moebius && (m + n) % 2 != 0)
            fail(ErrorCode::ParityViolation, "Moebius channel levels need m + n even");
        fill_level(channel_spectrum(ch->channel.D_half, ch->channel.w, m, n), out);
    });
}

bl_status bl_field_create(const char* kind, const double* params, size_t count, int m, int n, bl_variant variant,
                          bl_field** out)
{
    return guard([&] {
        require(kind, "kind");
        require(out, "out");
        auto f = std::make_unique<bl_field>();
        f->gen = make_field(kind, param_span(params, count), m, n, variant);
        *out = f.release();
    });
}

bl_status bl_field_from_channel(const bl_polygon* poly, const bl_channel* ch, int m, int n, bl_variant variant,
                                bl_field** out)
{
    return guard([&] {
        require(ch, "channel");
        require(out, "out");
        const Polygon& P = poly ? poly->preset.polygon : ch->polygon;
        auto f = std::make_unique<bl_field>();
        f->gen = channel_field(P, ch->channel, m, n, to_variant(variant));
        *out = f.release();
    });
}

void bl_field_destroy(bl_field* field) { delete field; }

bl_status bl_field_energy(const bl_field* field, double* energy)
{
    return guard([&] {
        require(field, "field");
        require(energy, "energy");
        *energy = field->gen.energy;
    });
}

bl_status bl_field_eval(const bl_field* field, double x, double y, double* re, double* im)
{
    return guard([&] {
        require(field, "field");
        const Complex v = field->gen({x, y});
        if (re) *re = v.real();
        if (im) *im = v.imag();
    });
}

bl_status bl_field_sample(const bl_field* field, double x0, double y0, double h, int nx, int ny, double* re, double* im,
                          unsigned char* mask, int* coarse)
{
    return guard([&] {
        require(field, "field");
        const Wavefield w = eval_wavefield(field->gen, {x0, y0, h, nx, ny});
        for (std::size_t i = 0; i < w.values.size(); ++i) {
            if (re) re[i] = w.values[i].real();
            if (im) im[i] = w.values[i].imag();
            if (mask) mask[i] = w.mask[i];
        }
        if (coarse) *coarse = w.coarse ? 1 : 0;
    });
}

bl_status bl_field_residuals(const bl_field* field, int boundary_samples, int interior_points, uint64_t seed,
                             double* boundary, double* helmholtz)
{
    return guard([&] {
        require(field, "field");
        const FieldGenerator& g = field->gen;
        if (boundary) *boundary = boundary_residual(g, boundary_samples);
        if (helmholtz) {
            const auto pts = sample_piece_interior(g, interior_points, seed, 1e-3 * g.domain.diameter());
            *helmholtz = helmholtz_residual(g, g.energy, pts);
        }
    });
}

bl_status bl_field_gradient_jump(const bl_field* field, int samples, double* max_jump, int* lines)
{
    return guard([&] {
        require(field, "field");
        require(max_jump, "max_jump");
        double worst = 0.0;
        for (const Segment& s : field->gen.piece_boundaries) worst = std::max(worst, gradient_jump(field->gen, s, samples).max_jump);
        *max_jump = worst;
        if (lines) *lines = static_cast<int>(field->gen.piece_boundaries.size());
    });
}

bl_status bl_modes_solve(const bl_polygon* poly, double h, int k, uint64_t seed, bl_modes** out)
{
    return guard([&] {
        require(poly, "poly");
        require(out, "out");
        auto m = std::make_unique<bl_modes>();
        m->mask = rasterize(poly->preset.polygon, h);
        SolverOptions opt;
        opt.seed = seed;
        m->pairs = lowest_eigenpairs(assemble(m->mask), k, h, opt);
        *out = m.release();
    });
}

void bl_modes_destroy(bl_modes* modes) { delete modes; }

bl_status bl_modes_count(const bl_modes* modes, int* count)
{
    return guard([&] {
        require(modes, "modes");
        require(count, "count");
        *count = static_cast<int>(modes->pairs.size());
    });
}

bl_status bl_modes_value(const bl_modes* modes, int index, double* energy, double* residual)
{
    return guard([&] {
        require(modes, "modes");
        if (index < 0 || index >= static_cast<int>(modes->pairs.size())) fail(ErrorCode::InvalidArgument, "mode index out of range");
        const EigenPair& p = modes->pairs[static_cast<std::size_t>(index)];
        if (energy) *energy = p.value;
        if (residual) *residual = p.residual;
    });
}

bl_status bl_modes_grid(const bl_modes* modes, double* x0, double* y0, double* h, int* nx, int* ny)
{
    return guard([&] {
        require(modes, "modes");
        const GridMask& g = modes->mask;
        if (x0) *x0 = g.x0;
        if (y0) *y0 = g.y0;
        if (h) *h = g.h;
        if (nx) *nx = g.nx;
        if (ny) *ny = g.ny;
    });
}

bl_status bl_modes_vector(const bl_modes* modes, int index, double* values)
{
    return guard([&] {
        require(modes, "modes");
        require(values, "values");
        if (index < 0 || index >= static_cast<int>(modes->pairs.size())) fail(ErrorCode::InvalidArgument, "mode index out of range");
        const auto& v = modes->pairs[static_cast<std::size_t>(index)].vector;
        const GridMask& g = modes->mask;
        for (std::size_t i = 0; i < g.index.size(); ++i) values[i] = g.index[i] < 0 ? 0.0 : v[static_cast<std::size_t>(g.index[i])];
    });
}

bl_status bl_modes_match(const bl_modes* modes, const double* energies, size_t count, double tol_rel, int* index,
                         double* rel_error)
{
    return guard([&] {
        require(modes, "modes");
        if (count == 0) return;
        require(energies, "energies");
        require(index, "index");
        std::vector<SpectrumEntry> sc(count);
        for (std::size_t i = 0; i < count; ++i) sc[i].E = energies[i];
        const MatchReport r = spectrum_match(sc, modes->pairs, tol_rel);
        for (std::size_t i = 0; i < count; ++i) {
            index[i] = -1;
            if (rel_error) rel_error[i] = -1.0;
        }
        for (const MatchedPair& p : r.matched) {
            index[p.semiclassical] = p.numeric;
            if (rel_error) rel_error[p.semiclassical] = p.rel_error;
        }
    });
}

bl_status bl_modes_overlap(const bl_modes* modes, const bl_field* field, double* overlaps, int* participation,
                           int* dominant, double* total)
{
    return guard([&] {
        require(modes, "modes");
        require(field, "field");
        const OverlapReport r = scar_overlap(field_on_mask(field->gen, modes->mask), modes->mask, modes->pairs);
        if (overlaps) std::copy(r.overlap.begin(), r.overlap.end(), overlaps);
        if (participation) *participation = r.participation;
        if (dominant) *dominant = r.dominant;
        if (total) *total = r.total;
    });
}

}  // extern "C"
