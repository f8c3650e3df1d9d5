#include <algorithm>
#include <numeric>

#include "billiard/error.hpp"
#include "billiard/skeleton.hpp"
#include "internal.hpp"

namespace billiard {

namespace {

constexpr int max_period_chords = 10000;

BouncePath side_chord(const Polygon& poly, int v)
{
    const Side& s = poly.side(v);
    BouncePath path;
    path.segments.push_back({s.a, s.beta, s.length, s.b, -1, s.beta});
    path.total_length = s.length;
    path.terminated_at_vertex = true;
    path.start_vertex = v;
    path.end_vertex = static_cast<int>((v + 1) % poly.size());
    return path;
}

int vertex_at(const Polygon& poly, Vec2 p)
{
    for (std::size_t v = 0; v < poly.size(); ++v)
        if (norm(poly.vertices()[v] - p) <= poly.vertex_tolerance()) return static_cast<int>(v);
    return -1;
}

// Path from vertex v along g until the next vertex, or along a side when g runs along one.
std::optional<BouncePath> diagonal_from_vertex(const Polygon& poly, int v, double g, int max_chords)
{
    const std::size_t n = poly.size();
    if (std::abs(angle_diff(g, poly.side(v).beta)) < 1e-9) return side_chord(poly, v);
    const int prev = static_cast<int>((v + n - 1) % n);
    if (std::abs(angle_diff(g, poly.side(prev).beta + std::numbers::pi)) < 1e-9) {
        BouncePath path = side_chord(poly, prev);
        Chord& c = path.segments.front();
        std::swap(c.from, c.to);
        c.gamma = wrap_angle(c.gamma + std::numbers::pi);
        std::swap(path.start_vertex, path.end_vertex);
        return path;
    }
    if (!detail::inward_at_vertex(poly, v, g)) return std::nullopt;
    BouncePath path = trace_ray(poly, poly.vertices()[v], g, max_chords);
    if (!path.terminated_at_vertex) return std::nullopt;
    return path;
}

bool same_diagonal(const BouncePath& x, const BouncePath& y, double tol)
{
    if (x.segments.size() != y.segments.size()) return false;
    std::vector<Vec2> px{x.segments.front().from}, py{y.segments.front().from};
    for (const Chord& c : x.segments) px.push_back(c.to);
    for (const Chord& c : y.segments) py.push_back(c.to);
    const auto close = [tol](Vec2 a, Vec2 b) { return norm(a - b) <= tol; };
    if (std::equal(px.begin(), px.end(), py.begin(), close)) return true;
    return std::equal(px.begin(), px.end(), py.rbegin(), close);
}

// Singular diagonal bounding the channel at the reference point `edge`.
BouncePath channel_edge_diagonal(const Polygon& poly, Vec2 edge, double gamma, int reflections,
                                  const std::vector<double>& dirs)
{
    if (const int corner = vertex_at(poly, edge); corner >= 0) {
        // the channel ends at a corner: the diagonal leaves it along one of the channel directions
        for (const double g : dirs)
            if (auto d = diagonal_from_vertex(poly, corner, g, 2 * reflections + 2)) return *d;
        fail(ErrorCode::Internal, "no singular diagonal leaves the channel corner");
    }
    const BouncePath path = trace_ray(poly, edge, gamma, reflections + 1);
    int v = -1;
    double g = gamma;
    if (path.terminated_at_vertex) {
        v = path.end_vertex;
        g = wrap_angle(path.segments.back().gamma + std::numbers::pi);
    } else {
        // fall back to the vertex closest to the edge ray
        double best = 1e300;
        for (const Chord& c : path.segments) {
            const Vec2 d = direction(c.gamma);
            for (std::size_t k = 0; k < poly.size(); ++k) {
                const Vec2 rel = poly.vertices()[k] - c.from;
                const double t = std::clamp(dot(rel, d), 0.0, c.length);
                const double dist = norm(rel - t * d);
                if (dist < best) {
                    best = dist;
                    v = static_cast<int>(k);
                    g = wrap_angle(c.gamma + std::numbers::pi);
                }
            }
        }
    }
    if (v < 0) fail(ErrorCode::Internal, "channel edge without a vertex");
    if (auto d = diagonal_from_vertex(poly, v, g, 2 * reflections + 2)) return *d;
    if (auto d = diagonal_from_vertex(poly, v, wrap_angle(g + std::numbers::pi), 2 * reflections + 2)) return *d;
    fail(ErrorCode::Internal, "singular diagonal does not close at a vertex");
}

std::vector<double> path_directions(const BouncePath& path)
{
    std::vector<double> dirs;
    for (const Chord& c : path.segments) {
        for (double g : {c.gamma, wrap_angle(2.0 * c.to_beta - c.gamma)}) {
            const bool seen = std::any_of(dirs.begin(), dirs.end(),
                                          [g](double o) { return std::abs(angle_diff(o, g)) < 1e-9; });
            if (!seen) dirs.push_back(g);
        }
    }
    return dirs;
}

}  // namespace

PeriodicChannel rect_channel(double a, double b, int p, int q)
{
    if (a <= 0 || b <= 0) fail(ErrorCode::InvalidArgument, "side lengths must be positive");
    if (p <= 0 || q <= 0) fail(ErrorCode::InvalidArgument, "p and q must be positive");
    if (std::gcd(p, q) != 1) fail(ErrorCode::NotCoprime, "p and q must be coprime");
    const double alpha = std::atan2(p * b, q * a);
    PeriodicChannel ch;
    ch.D_half = std::hypot(q * a, p * b);
    ch.D = 2.0 * ch.D_half;
    ch.w = a / p * std::sin(alpha);
    const double w_other = b / q * std::cos(alpha);
    if (std::abs(ch.w - w_other) > 1e-12 * std::max(1.0, ch.w))
        fail(ErrorCode::Internal, "channel widths disagree");
    ch.n_bundles = 2 * p + 2 * q;
    ch.reflections = 2 * p + 2 * q;
    ch.direction = alpha;
    ch.moebius = false;
    ch.ref_side = 0;
    ch.s_lo = 0.0;
    ch.s_hi = a / p;
    ch.gamma_ref = alpha;
    ch.directions = {alpha, std::numbers::pi - alpha, std::numbers::pi + alpha, two_pi - alpha};
    const Polygon rect = build_polygon({{0, 0}, {a, 0}, {a, b}, {0, b}});
    const int cap = 4 * (p + q) + 4;
    ch.sd_pair[0] = trace_ray(rect, {0, 0}, alpha, cap);
    ch.sd_pair[1] = trace_ray(rect, {a, 0}, std::numbers::pi - alpha, cap);
    return ch;
}

std::vector<BouncePath> find_singular_diagonals(const Polygon& poly, double gamma, int max_bounces)
{
    std::vector<double> dirs;
    if (poly.is_rational())
        dirs = direction_orbit(poly, gamma);
    else
        dirs = {wrap_angle(gamma), wrap_angle(gamma + std::numbers::pi)};
    return find_singular_diagonals(poly, dirs, max_bounces);
}

std::vector<BouncePath> find_singular_diagonals(const Polygon& poly, std::span<const double> directions,
                                                int max_bounces)
{
    std::vector<BouncePath> found;
    const double tol = 1e-8 * poly.perimeter();
    for (std::size_t v = 0; v < poly.size(); ++v) {
        for (const double g : directions) {
            auto path = diagonal_from_vertex(poly, static_cast<int>(v), g, max_bounces);
            if (!path) continue;
            const bool dup = std::any_of(found.begin(), found.end(),
                                         [&](const BouncePath& f) { return same_diagonal(f, *path, tol); });
            if (!dup) found.push_back(std::move(*path));
        }
    }
    return found;
}

PeriodicChannel channel_from_direction(const Polygon& poly, double gamma, std::optional<ChannelSeed> seed)
{
    gamma = wrap_angle(gamma);
    if (!seed) {
        int k = 0;
        while (k < static_cast<int>(poly.size()) && !poly.points_inward(static_cast<std::size_t>(k), gamma)) ++k;
        if (k == static_cast<int>(poly.size())) fail(ErrorCode::InvalidArgument, "direction is parallel to every side");
        // rational fractions of a side tend to sit on singular diagonals
        const double len = poly.side(static_cast<std::size_t>(k)).length;
        const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
        for (const double f : {golden, 1.0 - golden, golden * golden * golden}) {
            const ChannelSeed s{k, f * len};
            if (detail::trace_return(poly, k, s.offset, gamma, max_period_chords).returned) {
                seed = s;
                break;
            }
        }
        if (!seed) seed = ChannelSeed{k, golden * len};
    }
    const int side = seed->side;
    if (side < 0 || side >= static_cast<int>(poly.size()))
        fail(ErrorCode::InvalidArgument, "seed side out of range");
    const Side& ref = poly.side(side);
    if (!poly.points_inward(side, gamma)) fail(ErrorCode::InvalidArgument, "direction does not enter from the seed side");
    if (seed->offset <= 0 || seed->offset >= ref.length)
        fail(ErrorCode::InvalidArgument, "seed offset must lie inside the side");

    const detail::ReturnInfo info = detail::trace_return(poly, side, seed->offset, gamma, max_period_chords);
    if (!info.returned) fail(ErrorCode::NotPeriodic, "seed ray does not close within 10^4 reflections");

    PeriodicChannel ch;
    ch.moebius = info.first_section_chords % 2 == 1;
    ch.D = info.length;
    ch.reflections = info.chords;
    if (info.chords % 2 == 1) {
        // the seed sits on the core of a Moebius band; a full turn takes two laps
        ch.D *= 2.0;
        ch.reflections *= 2;
    }
    ch.D_half = 0.5 * ch.D;
    ch.n_bundles = ch.moebius ? ch.reflections / 2 : ch.reflections;

    // Transverse offsets of every vertex relative to the seed orbit. Reflections flip
    // the transverse orientation, hence the alternating sign.
    const BouncePath seed_path = trace_ray(poly, ref.a + seed->offset * ref.tangent, gamma, ch.reflections);
    const double sin_a = std::sin(gamma - ref.beta);
    const double vtol = poly.vertex_tolerance();
    std::vector<double> below, above;
    for (std::size_t i = 0; i < seed_path.segments.size(); ++i) {
        const Chord& c = seed_path.segments[i];
        const Vec2 d = direction(c.gamma);
        const Vec2 nrm{-d.y, d.x};
        const double sign = i % 2 == 0 ? 1.0 : -1.0;
        for (const Vec2& v : poly.vertices()) {
            const double nu = sign * dot(nrm, v - c.from);
            const double u = seed->offset - nu / sin_a;
            if (std::abs(nu) <= vtol) continue;
            (u < seed->offset ? below : above).push_back(u);
        }
    }
    std::sort(below.begin(), below.end(), std::greater<>());
    std::sort(above.begin(), above.end());
    const auto blocked = [&](double u) {
        if (u <= vtol || u >= ref.length - vtol) return true;
        return trace_ray(poly, ref.a + u * ref.tangent, gamma, ch.reflections + 1).terminated_at_vertex;
    };
    const auto first_blocked = [&](const std::vector<double>& cands, double limit) {
        for (const double u : cands)
            if (blocked(u)) return std::clamp(u, 0.0, ref.length);
        return limit;
    };
    ch.s_lo = first_blocked(below, 0.0);
    ch.s_hi = first_blocked(above, ref.length);
    ch.ref_side = side;
    ch.gamma_ref = gamma;
    ch.direction = wrap_angle(gamma - ref.beta);
    ch.w = (ch.s_hi - ch.s_lo) * std::sin(ch.direction);
    if (!(ch.w > 0)) fail(ErrorCode::DegenerateChannel, "channel has zero width");

    ch.directions = path_directions(seed_path);
    ch.sd_pair[0] = channel_edge_diagonal(poly, ref.a + ch.s_lo * ref.tangent, gamma, ch.reflections, ch.directions);
    ch.sd_pair[1] = channel_edge_diagonal(poly, ref.a + ch.s_hi * ref.tangent, gamma, ch.reflections, ch.directions);
    return ch;
}

std::vector<Bundle> regular_pieces(const Polygon& poly, const Bundle& bundle)
{
    const double lo = bundle.local_start(poly);
    std::vector<Bundle> out;
    for (const detail::Piece& p : detail::split_by_shadows(poly, bundle.side_index, lo, lo + bundle.l, bundle.gamma)) {
        Bundle b = bundle;
        b.u = poly.side(bundle.side_index).s0 + p.lo;
        b.l = p.hi - p.lo;
        out.push_back(b);
    }
    return out;
}

DeltaCheck delta_constancy_check(const Polygon& poly, const Bundle& bundle, int samples)
{
    if (samples < 2) fail(ErrorCode::InvalidArgument, "at least two samples required");
    const Side& src = poly.side(bundle.side_index);
    const double lo = bundle.local_start(poly);
    const double cos_src = std::cos(bundle.gamma - src.beta);
    DeltaCheck out;
    std::vector<double> delta, h;
    for (int i = 0; i < samples; ++i) {
        const double s = lo + bundle.l * (i + 0.5) / samples;
        const BouncePath path = trace_ray(poly, src.a + s * src.tangent, bundle.gamma, 1);
        const Chord& c = path.segments.front();
        if (out.target_side < 0) out.target_side = c.to_side;
        if (c.to_side != out.target_side)
            fail(ErrorCode::BundleNotRegular, "bundle splits across several target sides");
        const Side& tgt = poly.side(c.to_side);
        const double ht = dot(c.to - tgt.a, tgt.tangent);
        const double cos_tgt = std::cos(reflect_direction(bundle.gamma, tgt.beta) - tgt.beta);
        h.push_back(ht);
        delta.push_back(c.length + cos_src * (s - lo) - cos_tgt * (ht - h.front()));
    }
    for (std::size_t i = 0; i + 1 < h.size(); ++i)
        if ((h[i + 1] - h[i]) * (h[1] - h[0]) <= 0)
            fail(ErrorCode::BundleNotRegular, "boundary map is not monotone");
    for (const double d : delta) out.max_deviation = std::max(out.max_deviation, std::abs(d - delta.front()));
    out.pass = out.max_deviation < 1e-10 * poly.perimeter();
    return out;
}

double ChannelQuantization::momentum(int n) const { return n * std::numbers::pi / D_half; }

double ChannelQuantization::transverse_energy(int m) const
{
    const double k = m * std::numbers::pi / w;
    return 0.5 * k * k;
}

double ChannelQuantization::energy(int m, int n) const
{
    const double p = momentum(n);
    return 0.5 * p * p + transverse_energy(m);
}

ChannelQuantization quantize_channel(const PeriodicChannel& ch)
{
    if (!(ch.D_half > 0) || !(ch.w > 0)) fail(ErrorCode::DegenerateChannel, "channel needs positive length and width");
    return {ch.D_half, ch.w};
}

}  // namespace billiard
