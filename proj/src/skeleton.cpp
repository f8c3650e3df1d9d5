#include "billiard/skeleton.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

#include "billiard/error.hpp"
#include "billiard/rational.hpp"
#include "internal.hpp"

namespace billiard {

namespace {

using detail::line_param;
using detail::split_by_shadows;
using detail::inward_at_vertex;
using detail::trace_return;
using detail::ReturnInfo;
using detail::Piece;

constexpr std::size_t max_orbit = 4096;
constexpr int max_rounds = 10000;
constexpr int max_return_chords = 10000;

using Interval = std::pair<double, double>;

// Sorted disjoint intervals; neighbours closer than gap are merged.
class IntervalSet {
public:
    // Adds [lo, hi] and returns the parts that were not covered before.
    std::vector<Interval> add(Interval in, double gap)
    {
        std::vector<Interval> fresh;
        double cursor = in.first;
        for (const Interval& iv : items_) {
            if (iv.second < cursor) continue;
            if (iv.first > in.second) break;
            if (iv.first > cursor) fresh.emplace_back(cursor, iv.first);
            cursor = std::max(cursor, iv.second);
        }
        if (cursor < in.second) fresh.emplace_back(cursor, in.second);
        std::erase_if(fresh, [gap](const Interval& f) { return f.second - f.first <= gap; });

        items_.push_back(in);
        std::sort(items_.begin(), items_.end());
        std::vector<Interval> merged;
        for (const Interval& iv : items_) {
            if (!merged.empty() && iv.first <= merged.back().second + gap)
                merged.back().second = std::max(merged.back().second, iv.second);
            else
                merged.push_back(iv);
        }
        items_ = std::move(merged);
        return fresh;
    }
    const std::vector<Interval>& items() const { return items_; }

private:
    std::vector<Interval> items_;
};

int find_direction(const std::vector<double>& dirs, double g)
{
    for (std::size_t i = 0; i < dirs.size(); ++i)
        if (std::abs(angle_diff(dirs[i], g)) < 1e-9) return static_cast<int>(i);
    return -1;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    bool unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

}  // namespace

namespace detail {

bool inward_at_vertex(const Polygon& poly, std::size_t v, double g)
{
    const std::size_t n = poly.size();
    const double out_beta = poly.side(v).beta;
    const double in_beta = poly.side((v + n - 1) % n).beta;
    const double wedge = wrap_angle(in_beta + std::numbers::pi - out_beta);
    const double rel = wrap_angle(g - out_beta);
    return rel > 1e-12 && rel < wedge - 1e-12;
}

std::vector<Piece> split_by_shadows(const Polygon& poly, int k, double lo, double hi, double gamma)
{
    const Side& side = poly.side(k);
    const Vec2 d = direction(gamma);
    std::vector<double> cuts{lo, hi};
    for (const Vec2& v : poly.vertices()) {
        const double u = line_param(side, v, d);
        if (u > lo && u < hi) cuts.push_back(u);
    }
    std::sort(cuts.begin(), cuts.end());
    const double tiny = 1e-13 * poly.perimeter();
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] <= tiny) continue;
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        const BouncePath path = trace_ray(poly, side.a + mid * side.tangent, gamma, 1);
        const int target = path.segments.front().to_side;
        if (!pieces.empty() && pieces.back().target == target && pieces.back().hi >= cuts[i] - tiny)
            pieces.back().hi = cuts[i + 1];
        else
            pieces.push_back({cuts[i], cuts[i + 1], target});
    }
    return pieces;
}

ReturnInfo trace_return(const Polygon& poly, int side, double offset, double gamma, int cap)
{
    const Side& s = poly.side(side);
    const Vec2 start = s.a + offset * s.tangent;
    const double tol = 1e-9 * poly.perimeter();
    Vec2 p = start;
    double g = gamma;
    ReturnInfo info;
    for (int c = 1; c <= cap; ++c) {
        const BouncePath path = trace_ray(poly, p, g, 1);
        const Chord& ch = path.segments.front();
        info.length += ch.length;
        if (path.terminated_at_vertex) return info;
        p = ch.to;
        g = reflect_direction(g, ch.to_beta);
        if (ch.to_side != side || std::abs(angle_diff(g, gamma)) >= 1e-9) continue;
        if (info.first_section_chords < 0) info.first_section_chords = c;
        if (norm(p - start) < tol) {
            info.returned = true;
            info.chords = c;
            return info;
        }
    }
    return info;
}

}  // namespace detail

const char* to_string(SkeletonKind k)
{
    switch (k) {
    case SkeletonKind::RegularGlobal: return "RegularGlobal";
    case SkeletonKind::SingularGlobal: return "SingularGlobal";
    case SkeletonKind::SingularPeriodic: return "SingularPeriodic";
    }
    return "?";
}

const char* to_string(SurfaceKind k)
{
    switch (k) {
    case SurfaceKind::Torus: return "Torus";
    case SurfaceKind::CylinderLike: return "CylinderLike";
    case SurfaceKind::MoebiusLike: return "MoebiusLike";
    case SurfaceKind::ClosedGenusG: return "ClosedGenusG";
    }
    return "?";
}

std::vector<double> direction_orbit(const Polygon& poly, double gamma0)
{
    if (!poly.is_rational())
        fail(ErrorCode::AngleNotRational, "direction orbits need rational angles");
    std::vector<double> orbit{wrap_angle(gamma0)};
    std::deque<double> queue{orbit.front()};
    while (!queue.empty()) {
        const double g = queue.front();
        queue.pop_front();
        for (const Side& s : poly.sides()) {
            const double r = wrap_angle(2.0 * s.beta - g);
            const bool seen = std::any_of(orbit.begin(), orbit.end(),
                                          [r](double o) { return std::abs(angle_diff(o, r)) < 1e-12; });
            if (seen) continue;
            orbit.push_back(r);
            if (orbit.size() > max_orbit)
                fail(ErrorCode::OrbitOverflow, "direction orbit exceeds 4096 entries");
            queue.push_back(r);
        }
    }
    return orbit;
}

Skeleton build_skeleton(const Polygon& poly, double gamma0)
{
    Skeleton skel;
    skel.polygon = poly;
    skel.directions = direction_orbit(poly, gamma0);
    const auto& dirs = skel.directions;
    const int n = static_cast<int>(poly.size());
    const double gap = 1e-9 * poly.perimeter();

    int seed_side = -1;
    for (int k = 0; k < n; ++k) {
        if (poly.points_inward(k, dirs[0])) {
            seed_side = k;
            break;
        }
    }
    if (seed_side < 0) fail(ErrorCode::InvalidArgument, "direction is parallel to every side");

    std::map<std::pair<int, int>, IntervalSet> coverage;
    struct Work {
        int side, dir;
        double lo, hi;
    };
    std::vector<Work> work{{seed_side, 0, 0.0, poly.side(seed_side).length}};
    coverage[{seed_side, 0}].add({0.0, poly.side(seed_side).length}, gap);

    int round = 0;
    while (!work.empty()) {
        if (++round > max_rounds) {
            std::ostringstream msg;
            msg << "closure not reached after " << max_rounds << " rounds, " << work.size()
                << " pending intervals";
            fail(ErrorCode::NotClosedAfterMaxIter, msg.str());
        }
        std::vector<Work> next;
        for (const Work& item : work) {
            const double g = dirs[item.dir];
            const Vec2 d = direction(g);
            const Side& src = poly.side(item.side);
            for (const Piece& piece : split_by_shadows(poly, item.side, item.lo, item.hi, g)) {
                const Side& tgt = poly.side(piece.target);
                const double h1 = line_param(tgt, src.a + piece.lo * src.tangent, d);
                const double h2 = line_param(tgt, src.a + piece.hi * src.tangent, d);
                const double lo = std::clamp(std::min(h1, h2), 0.0, tgt.length);
                const double hi = std::clamp(std::max(h1, h2), 0.0, tgt.length);
                const int dir = find_direction(dirs, reflect_direction(g, tgt.beta));
                if (dir < 0) fail(ErrorCode::Internal, "reflected direction outside the orbit");
                for (const Interval& f : coverage[{piece.target, dir}].add({lo, hi}, gap))
                    next.push_back({piece.target, dir, f.first, f.second});
            }
        }
        work = std::move(next);
    }
    skel.rounds = round;
    skel.closed = true;

    for (const auto& [key, set] : coverage) {
        const auto [side, dir] = key;
        for (const Interval& iv : set.items()) {
            Bundle b;
            b.side_index = side;
            b.u = poly.side(side).s0 + iv.first;
            b.l = iv.second - iv.first;
            b.gamma = dirs[dir];
            b.alpha = wrap_angle(b.gamma - poly.side(side).beta);
            b.direction_index = dir;
            skel.bundles.push_back(b);
        }
    }
    std::sort(skel.bundles.begin(), skel.bundles.end(), [](const Bundle& x, const Bundle& y) {
        return std::tie(x.direction_index, x.side_index, x.u) < std::tie(y.direction_index, y.side_index, y.u);
    });

    // compound bundles: glue bases sharing a vertex, then bases linked by a vertex shadow
    const std::size_t nb = skel.bundles.size();
    UnionFind uf(nb);
    std::vector<bool> singular_root(nb, false);
    const double vtol = poly.vertex_tolerance();
    for (std::size_t i = 0; i < nb; ++i) {
        const Bundle& bi = skel.bundles[i];
        const double end_i = bi.local_start(poly) + bi.l;
        if (std::abs(end_i - poly.side(bi.side_index).length) > gap) continue;
        const int next_side = (bi.side_index + 1) % n;
        for (std::size_t j = 0; j < nb; ++j) {
            const Bundle& bj = skel.bundles[j];
            if (bj.direction_index == bi.direction_index && bj.side_index == next_side &&
                bj.local_start(poly) <= gap)
                uf.unite(static_cast<int>(i), static_cast<int>(j));
        }
    }
    std::vector<std::pair<int, int>> singular_links;
    for (std::size_t i = 0; i < nb; ++i) {
        const Bundle& bi = skel.bundles[i];
        const Side& side = poly.side(bi.side_index);
        const double ends[2] = {bi.local_start(poly), bi.local_start(poly) + bi.l};
        for (const double e : ends) {
            const Vec2 pt = side.a + e * side.tangent;
            int vertex = -1;
            for (std::size_t v = 0; v < poly.size(); ++v)
                if (norm(poly.vertices()[v] - pt) <= vtol) vertex = static_cast<int>(v);
            if (vertex < 0) continue;
            const double back = wrap_angle(bi.gamma + std::numbers::pi);
            if (!inward_at_vertex(poly, vertex, back)) continue;
            const BouncePath path = trace_ray(poly, pt, back, 1);
            if (path.terminated_at_vertex) continue;
            const Chord& ch = path.segments.front();
            const Side& hit = poly.side(ch.to_side);
            const double h = dot(ch.to - hit.a, hit.tangent);
            for (std::size_t j = 0; j < nb; ++j) {
                const Bundle& bj = skel.bundles[j];
                if (j == i || bj.direction_index != bi.direction_index || bj.side_index != ch.to_side)
                    continue;
                const double lo = bj.local_start(poly);
                if (h > lo + gap && h < lo + bj.l - gap)
                    singular_links.emplace_back(static_cast<int>(i), static_cast<int>(j));
            }
        }
    }
    for (const auto& [i, j] : singular_links) {
        uf.unite(i, j);
        singular_root[uf.find(i)] = true;
    }
    std::map<int, std::size_t> root_to_compound;
    for (std::size_t i = 0; i < nb; ++i) {
        const int r = uf.find(static_cast<int>(i));
        auto [it, inserted] = root_to_compound.try_emplace(r, skel.reduced_bundles.size());
        if (inserted) skel.reduced_bundles.push_back({skel.bundles[i].gamma, {}, false});
        skel.reduced_bundles[it->second].members.push_back(static_cast<int>(i));
    }
    for (const auto& [r, idx] : root_to_compound) skel.reduced_bundles[idx].singular = singular_root[r];
    return skel;
}

SkeletonClass classify(const Skeleton& skel)
{
    const Polygon& poly = skel.polygon;
    SkeletonClass cls;
    std::ostringstream diag;

    // periodicity of sampled rays
    constexpr int rays_per_bundle = 32;
    bool all_periodic = !skel.bundles.empty();
    double period = 0.0;
    int reflections = 0;
    bool reversing = false;
    for (const Bundle& b : skel.bundles) {
        const double lo = b.local_start(poly);
        for (int r = 0; r < rays_per_bundle && all_periodic; ++r) {
            const double off = lo + b.l * (r + 0.5) / rays_per_bundle;
            const BouncePath probe = trace_ray(poly, poly.side(b.side_index).a + off * poly.side(b.side_index).tangent, b.gamma, 1);
            if (probe.terminated_at_vertex) continue;
            const ReturnInfo info = trace_return(poly, b.side_index, off, b.gamma, max_return_chords);
            if (!info.returned) {
                all_periodic = false;
                break;
            }
            // an odd first-return map is a glide reflection: transverse orientation flips
            if (info.first_section_chords % 2 == 1) reversing = true;
            if (info.length > period) {
                period = info.length;
                reflections = info.chords;
            }
        }
        if (!all_periodic) break;
    }
    if (all_periodic) {
        cls.kind = SkeletonKind::SingularPeriodic;
        cls.surface = reversing ? SurfaceKind::MoebiusLike : SurfaceKind::CylinderLike;
        diag << "all sampled rays periodic, period " << period << ", reflections " << reflections;
        cls.diagnostics = diag.str();
        return cls;
    }

    // global: every compound bundle sweeps the whole polygon
    const auto box = poly.bounding_box();
    bool global = true;
    int checked = 0;
    const double vtol = poly.vertex_tolerance();
    for (const CompoundBundle& cb : skel.reduced_bundles) {
        for (int iy = 0; iy < 12 && global; ++iy) {
            for (int ix = 0; ix < 12 && global; ++ix) {
                const Vec2 pt{box[0].x + (box[1].x - box[0].x) * (ix + 0.37) / 12.0,
                              box[0].y + (box[1].y - box[0].y) * (iy + 0.61) / 12.0};
                if (!poly.contains(pt, 1e-6 * poly.perimeter())) continue;
                const BouncePath back = trace_ray(poly, pt, cb.gamma + std::numbers::pi, 1);
                if (back.terminated_at_vertex) continue;
                const Chord& ch = back.segments.front();
                const Side& hit = poly.side(ch.to_side);
                const double h = dot(ch.to - hit.a, hit.tangent);
                bool covered = false;
                for (const int m : cb.members) {
                    const Bundle& b = skel.bundles[m];
                    const double lo = b.local_start(poly);
                    if (b.side_index == ch.to_side && h >= lo - vtol && h <= lo + b.l + vtol) covered = true;
                }
                ++checked;
                if (!covered) global = false;
            }
        }
        if (!global) break;
    }
    const bool any_singular = std::any_of(skel.reduced_bundles.begin(), skel.reduced_bundles.end(),
                                          [](const CompoundBundle& c) { return c.singular; });
    diag << skel.reduced_bundles.size() << " compound bundles, " << checked << " coverage samples";
    if (global) {
        cls.genus = genus(poly, static_cast<int>(skel.reduced_bundles.size()));
        cls.surface = *cls.genus == 1 ? SurfaceKind::Torus : SurfaceKind::ClosedGenusG;
        cls.kind = any_singular ? SkeletonKind::SingularGlobal : SkeletonKind::RegularGlobal;
        if (any_singular) cls.surface = SurfaceKind::ClosedGenusG;
        diag << ", global" << (any_singular ? " with bundles glued along vertex shadows" : "");
    } else {
        cls.kind = SkeletonKind::SingularGlobal;
        diag << ", some compound bundle does not cover the polygon";
    }
    cls.diagnostics = diag.str();
    return cls;
}

int genus(const Polygon& poly, int compound_bundles)
{
    if (!poly.is_rational()) fail(ErrorCode::AngleNotRational, "genus needs rational angles");
    if (compound_bundles <= 0) fail(ErrorCode::InvalidArgument, "number of compound bundles must be positive");
    Rational sum(0);
    for (const RationalAngle& a : poly.angles()) sum += Rational(a.p - 1, a.q);
    const Rational g = Rational(1) + Rational(compound_bundles, 4) * sum;
    if (g.denominator() != 1) fail(ErrorCode::NonIntegerGenus, "genus formula gives a non-integer");
    return static_cast<int>(g.numerator());
}

}  // namespace billiard
