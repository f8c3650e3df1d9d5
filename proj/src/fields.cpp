#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>
#include <string>

#include "billiard/error.hpp"
#include "billiard/rational.hpp"
#include "billiard/swf.hpp"
#include "phase.hpp"

namespace billiard {

namespace {

using detail::cis_at;
using detail::cos_at;
using detail::Linear;
using detail::sin_at;

constexpr double pi = std::numbers::pi;
const Complex I{0.0, 1.0};

Complex pick(Complex running, Variant v)
{
    switch (v) {
    case Variant::Plus: return running.imag();
    case Variant::Minus: return running.real();
    case Variant::Running: return running;
    }
    return running;
}

const char* variant_name(Variant v)
{
    switch (v) {
    case Variant::Plus: return "sin";
    case Variant::Minus: return "cos";
    case Variant::Running: return "running";
    }
    return "?";
}

void check_closed(const Polygon& poly, Vec2 p)
{
    if (!poly.contains(p) && poly.distance_to_boundary(p) > 1e-9 * poly.perimeter())
        fail(ErrorCode::OutsideDomain, "point outside the billiard");
}

Polygon rectangle(double a, double b) { return build_polygon({{0, 0}, {a, 0}, {a, b}, {0, b}}); }

void append_path(std::vector<Segment>& out, const BouncePath& path)
{
    for (const Chord& c : path.segments) out.push_back({c.from, c.to});
}

Rational commensurate(double ratio, const char* what)
{
    const auto r = approximate_rational(ratio, 1000000, 1e-13 * std::abs(ratio));
    if (!r || *r <= 0) fail(ErrorCode::NotCommensurate, std::string(what) + " is not a ratio of integers up to 10^6");
    return *r;
}

// First boundary hit from p along d; a start on the boundary heading outward hits at t = 0.
struct Hit {
    bool found = false;
    double t = 0.0;
    int side = -1;
    Vec2 at;
};

Hit first_hit(const Polygon& poly, Vec2 p, double gamma, bool allow_zero)
{
    const Vec2 d = direction(gamma);
    const double tiny = 1e-12 * poly.perimeter();
    Hit best;
    best.t = 1e300;
    for (std::size_t k = 0; k < poly.size(); ++k) {
        const Side& s = poly.side(k);
        const Vec2 e = s.b - s.a;
        const double den = cross(d, e);
        if (cross(e, d) >= -1e-15 * s.length) continue;  // only outward crossings
        const Vec2 ap = s.a - p;
        const double t = cross(ap, e) / den;
        const double u = cross(ap, d) / den;
        if (u < -1e-12 || u > 1.0 + 1e-12) continue;
        if (allow_zero ? t < -tiny : t <= tiny) continue;
        if (t < best.t) {
            best.found = true;
            best.t = std::max(t, 0.0);
            best.side = static_cast<int>(k);
        }
    }
    if (best.found) best.at = p + best.t * d;
    return best;
}

}  // namespace

double distance_to_segment(Vec2 p, const Segment& s)
{
    const Vec2 e = s.b - s.a;
    const double len2 = dot(e, e);
    const double t = len2 > 0 ? std::clamp(dot(p - s.a, e) / len2, 0.0, 1.0) : 0.0;
    return norm(p - (s.a + t * e));
}

Complex FieldGenerator::operator()(Vec2 p) const
{
    check_closed(domain, p);
    return eval(p);
}

Complex rect_generic_swf(double a, double b, int m, int n, Vec2 p)
{
    if (p.x < -1e-12 * a || p.x > a * (1 + 1e-12) || p.y < -1e-12 * b || p.y > b * (1 + 1e-12))
        fail(ErrorCode::OutsideDomain, "point outside the rectangle");
    return -4.0 * sin_at({m * pi / a, 0.0}, p) * sin_at({0.0, n * pi / b}, p);
}

FieldGenerator rect_generic_field(double a, double b, int m, int n)
{
    FieldGenerator g;
    g.name = "rect_generic";
    g.kind = SpectrumKind::RectGeneric;
    g.energy = rect_generic_spectrum(a, b, m, n).E;
    g.domain = rectangle(a, b);
    g.eval = [=](Vec2 p) { return rect_generic_swf(a, b, m, n, p); };
    return g;
}

FieldGenerator rect_bouncing_field(double a, double b, int m, int n)
{
    FieldGenerator g;
    g.name = "rect_bouncing";
    g.kind = SpectrumKind::RectBouncing;
    g.energy = rect_bouncing_spectrum(a, b, m, n).E;
    g.domain = rectangle(a, b);
    g.eval = [=](Vec2 p) { return 2.0 * I * sin_at({0.0, n * pi / b}, p) * sin_at({m * pi / a, 0.0}, p); };
    return g;
}

Complex rect_channel_swf(double a, double b, int p, int q, int m, int n, Variant variant, Vec2 pt)
{
    if (pt.x < -1e-12 * a || pt.x > a * (1 + 1e-12) || pt.y < -1e-12 * b || pt.y > b * (1 + 1e-12))
        fail(ErrorCode::OutsideDomain, "point outside the rectangle");
    if (p <= 0 || q <= 0 || std::gcd(p, q) != 1) fail(ErrorCode::NotCoprime, "p and q must be coprime");
    const double alpha = std::atan2(p * b, q * a);
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const double D = std::hypot(q * a, p * b);
    const double w = a * b / D;
    const double k = n * pi / D;
    Complex sum = 0.0;
    // images of pt in the unfolded lattice that fall inside the channel strip
    for (const int sx : {1, -1}) {
        for (const int sy : {1, -1}) {
            const double nu0 = -sx * pt.x * sa + sy * pt.y * ca;
            const auto N = static_cast<std::int64_t>(std::ceil((-w - nu0) / (2.0 * w)));
            const double nu = nu0 + 2.0 * w * static_cast<double>(N);
            if (!(nu > -w && nu <= 0.0)) continue;
            const auto [kk, jj] = solve_linear_diophantine(q, p, N);
            // the lattice shift is the same for neighbouring points; reduce it on its own
            const double shift = std::fmod(2.0 * static_cast<double>(jj) * a * ca + 2.0 * static_cast<double>(kk) * b * sa, 2.0 * D);
            // -m pi nu / w, dropping the whole turns 2 pi m N
            const Linear across{m * pi * sx * sa / w, -m * pi * sy * ca / w};
            sum += double(sx * sy) * sin_at(across, pt) * cis_at({k * sx * ca, k * sy * sa, k * shift}, pt);
        }
    }
    return pick(sum, variant);
}

FieldGenerator rect_channel_field(double a, double b, int p, int q, int m, int n, Variant variant)
{
    const PeriodicChannel ch = rect_channel(a, b, p, q);
    FieldGenerator g;
    g.name = std::string("rect_channel_") + variant_name(variant);
    g.kind = SpectrumKind::RectChannel;
    g.energy = rect_channel_spectrum(a, b, p, q, m, n).E;
    g.domain = rectangle(a, b);
    g.eval = [=](Vec2 pt) { return rect_channel_swf(a, b, p, q, m, n, variant, pt); };
    for (const BouncePath& sd : ch.sd_pair) append_path(g.piece_boundaries, sd);
    g.regular = false;
    return g;
}

Complex channel_swf(const Polygon& poly, const PeriodicChannel& ch, int m, int n, Variant variant, Vec2 pt)
{
    check_closed(poly, pt);
    if (ch.moebius && (m + n) % 2 != 0)
        fail(ErrorCode::ParityViolation, "Moebius channel levels need m + n even");
    const Side& ref = poly.side(ch.ref_side);
    const double k = n * pi / ch.D_half;
    const double vtol = poly.vertex_tolerance();
    const double tol = 1e-9 * poly.perimeter();
    const int cap = 2 * ch.reflections + 4;
    Complex sum = 0.0;
    const Vec2 lo = ref.a + ch.s_lo * ref.tangent;
    const Vec2 dref = direction(ch.gamma_ref);
    std::vector<int> mirrors;
    for (const double g0 : ch.directions) {
        Vec2 pos = pt;
        double g = g0;
        double travelled = 0.0;
        mirrors.clear();
        for (int r = 1; r <= cap; ++r) {
            const Hit hit = first_hit(poly, pos, g, r == 1);
            if (!hit.found) break;
            travelled += hit.t;
            if (travelled > ch.D + tol) break;
            bool at_vertex = false;
            for (const Vec2& v : poly.vertices()) at_vertex = at_vertex || norm(v - hit.at) <= vtol;
            if (at_vertex) break;
            const double beta = poly.side(hit.side).beta;
            if (std::abs(std::sin(g - beta)) < 1e-12) break;
            g = wrap_angle(2.0 * beta - g);
            pos = hit.at;
            mirrors.push_back(hit.side);
            if (hit.side != ch.ref_side || std::abs(angle_diff(g, ch.gamma_ref)) > 1e-9) continue;
            const double u = dot(hit.at - ref.a, ref.tangent);
            if (u < ch.s_lo - vtol || u > ch.s_hi + vtol) continue;
            // compose the mirror chain into one affine map first; it depends only on the
            // sides hit, so neighbouring points share its rounding
            double m00 = 1, m01 = 0, m10 = 0, m11 = 1;
            Vec2 off{0.0, 0.0};
            for (const int k : mirrors) {
                const Side& s = poly.side(k);
                const double c2 = s.tangent.x * s.tangent.x - s.tangent.y * s.tangent.y;
                const double s2 = 2.0 * s.tangent.x * s.tangent.y;
                const double n00 = c2 * m00 + s2 * m10, n01 = c2 * m01 + s2 * m11;
                const double n10 = s2 * m00 - c2 * m10, n11 = s2 * m01 - c2 * m11;
                m00 = n00, m01 = n01, m10 = n10, m11 = n11;
                const Vec2 v = off - s.a;
                off = s.a + Vec2{c2 * v.x + s2 * v.y, s2 * v.x - c2 * v.y};
            }
            // unfolded point M pt + off - lo, read along dref and across it
            const Vec2 fixed = off - lo;
            const Vec2 along{m00 * dref.x + m10 * dref.y, m01 * dref.x + m11 * dref.y};
            const Vec2 normal{m00 * dref.y - m10 * dref.x, m01 * dref.y - m11 * dref.x};
            const double t = dot(normal, pt) + cross(fixed, dref);
            const double sign = (ch.reflections - r) % 2 == 0 ? 1.0 : -1.0;
            if (t > 0.0 && t < ch.w) {
                const double kt = m * pi / ch.w;
                const double phase = std::fmod(dot(fixed, dref) + ch.D, 2.0 * ch.D_half);
                sum += sign * sin_at({kt * normal.x, kt * normal.y, kt * cross(fixed, dref)}, pt) *
                       cis_at({k * along.x, k * along.y, k * phase}, pt);
            }
            break;
        }
    }
    return pick(sum, variant);
}

FieldGenerator channel_field(const Polygon& poly, const PeriodicChannel& ch, int m, int n, Variant variant)
{
    FieldGenerator g;
    g.name = std::string("channel_") + variant_name(variant);
    g.kind = SpectrumKind::ChannelGeneric;
    g.energy = channel_spectrum(ch.D_half, ch.w, m, n).E;
    g.domain = poly;
    g.eval = [poly, ch, m, n, variant](Vec2 pt) { return channel_swf(poly, ch, m, n, variant, pt); };
    for (const BouncePath& sd : find_singular_diagonals(poly, ch.directions, 4 * ch.reflections + 4))
        append_path(g.piece_boundaries, sd);
    g.regular = false;
    return g;
}

bool degeneracy_balance_exact(Rational a2, Rational b2, int p, int q, int k0, int l0, int m, int n)
{
    if (a2 <= 0 || b2 <= 0) fail(ErrorCode::InvalidArgument, "squared sides must be positive");
    if (Rational(p * p) * b2 * Rational(l0) != Rational(q * q) * a2 * Rational(k0))
        fail(ErrorCode::NotCommensurate, "(p b)^2 l0 must equal (q a)^2 k0");
    const std::int64_t k = std::int64_t(n) * k0, l = std::int64_t(n) * l0;
    const Rational px = Rational(p * p) / a2, qy = Rational(q * q) / b2;
    const Rational lhs = Rational((m - l) * (m - l)) * px + Rational((m + k) * (m + k)) * qy;
    const Rational rhs = Rational((m + l) * (m + l)) * px + Rational((m - k) * (m - k)) * qy;
    return lhs == rhs;
}

DegenerateRegular rect_degenerate_regular(double a, double b, int p, int q, int m, int n)
{
    if (m < 1 || n < 1) fail(ErrorCode::InvalidArgument, "quantum numbers start at 1");
    if (p <= 0 || q <= 0 || std::gcd(p, q) != 1) fail(ErrorCode::NotCoprime, "p and q must be coprime");
    const double t = p * b / (q * a);
    const Rational r = commensurate(t * t, "tan^2 of the channel angle");
    DegenerateRegular out;
    out.k0 = static_cast<int>(r.numerator());
    out.l0 = static_cast<int>(r.denominator());
    const int k0 = out.k0, l0 = out.l0;
    const double E = 0.5 * pi * pi * (double(m) * m + double(n) * n * k0 * l0) * (k0 + l0) * p * p / (a * a * k0);
    out.entry = {SpectrumKind::RectDegenerateRegular, m, n, E, 2};
    const auto make = [&](int sx, int sy, const char* name) {
        FieldGenerator g;
        g.name = name;
        g.kind = SpectrumKind::RectDegenerateRegular;
        g.energy = E;
        g.domain = rectangle(a, b);
        const double kx = (m + sx * n * l0) * p * pi / a;
        const double ky = (m + sy * n * k0) * q * pi / b;
        g.eval = [kx, ky](Vec2 pt) { return Complex(sin_at({kx, 0.0}, pt) * sin_at({0.0, ky}, pt)); };
        return g;
    };
    out.phi1 = make(-1, +1, "rect_degenerate_phi1");
    out.phi2 = make(+1, -1, "rect_degenerate_phi2");
    return out;
}

BrokenRectMode broken_rect_bouncing(double a, double b, double c, double d, int m, int n)
{
    if (m < 1 || n < 1) fail(ErrorCode::InvalidArgument, "quantum numbers start at 1");
    if (!(a > c && c > 0 && d > b && b > 0)) fail(ErrorCode::InvalidArgument, "need a > c > 0 and d > b > 0");
    const Rational ac = commensurate(a / c, "a : c");
    const Rational db = commensurate(d / b, "d : b");
    BrokenRectMode out;
    out.n0 = static_cast<int>(ac.numerator());
    out.l0 = static_cast<int>(ac.denominator());
    out.m0 = static_cast<int>(db.numerator());
    out.k0 = static_cast<int>(db.denominator());
    const double kx = double(n) * out.n0 * pi / a;
    const double ky = double(m) * out.m0 * pi / d;
    out.entry = {SpectrumKind::BrokenRectBouncing, m, n, 0.5 * (kx * kx + ky * ky), 1};
    FieldGenerator& g = out.field;
    g.name = "broken_rect_bouncing";
    g.kind = SpectrumKind::BrokenRectBouncing;
    g.energy = out.entry.E;
    g.domain = build_polygon({{0, 0}, {a, 0}, {a, b}, {c, b}, {c, d}, {0, d}});
    g.eval = [=](Vec2 pt) {
        if (pt.x > c && pt.y > b) return Complex(0.0);  // the bay
        return Complex(sin_at({kx, 0.0}, pt) * sin_at({0.0, ky}, pt));
    };
    return out;
}

Polygon lshape_polygon(const LShapeGeometry& g)
{
    if (!(g.width > g.column && g.column > 0 && g.height > g.strip && g.strip > 0))
        fail(ErrorCode::InvalidArgument, "need width > column > 0 and height > strip > 0");
    return build_polygon({{0, 0}, {g.width, 0}, {g.width, g.strip}, {g.column, g.strip}, {g.column, g.height}, {0, g.height}});
}

FieldGenerator lshape_superscar(const LShapeGeometry& geo, int m, int n, Variant variant)
{
    const SpectrumEntry entry = lshape_superscar_spectrum(geo, m, n);
    const double c = geo.column;
    const double alpha = std::atan2(geo.height, c);
    const double ca = std::cos(alpha), sa = std::sin(alpha), cot = ca / sa;
    const double D = std::hypot(geo.height, c);
    const double W = c - geo.strip * cot;  // channel width along x
    const double k = n * pi / D;
    FieldGenerator g;
    g.name = std::string("lshape_superscar_") + variant_name(variant);
    g.kind = SpectrumKind::LShapeSuperscar;
    g.energy = entry.E;
    g.domain = lshape_polygon(geo);
    g.regular = false;
    g.eval = [=](Vec2 pt) {
        const double x = pt.x, y = pt.y;
        if (x > c) return Complex(0.0);
        const double kw = m * pi / W;
        const double sigma = x - y * cot, tau = x + y * cot;
        Complex sum = 0.0;
        if (sigma > 0 && sigma < W) sum += cis_at({k * ca, k * sa}, pt) * sin_at({kw, -kw * cot}, pt);
        if (sigma < 0 && sigma > -W) sum -= cis_at({-k * ca, -k * sa}, pt) * sin_at({kw, -kw * cot}, pt);
        if (tau > 0 && tau < W) sum -= cis_at({k * ca, -k * sa}, pt) * sin_at({kw, kw * cot}, pt);
        if (tau > 2 * c - W && tau < 2 * c)
            sum -= cis_at({-k * ca, k * sa, 2 * c * k * ca}, pt) * sin_at({-kw, -kw * cot, 2 * c * kw}, pt);
        return pick(sum, variant);
    };
    const double top = geo.height + 1.0, bottom = -1.0;
    for (const double s : {-W, 0.0, W})
        g.piece_boundaries.push_back({{s + bottom * cot, bottom}, {s + top * cot, top}});
    for (const double t : {0.0, W, 2 * c - W, 2 * c})
        g.piece_boundaries.push_back({{t - bottom * cot, bottom}, {t - top * cot, top}});
    g.piece_boundaries.push_back({{c, 0.0}, {c, geo.height}});
    return g;
}

Polygon equilateral_triangle(double side)
{
    if (!(side > 0)) fail(ErrorCode::InvalidArgument, "side must be positive");
    return build_polygon({{0, 0}, {side, 0}, {0.5 * side, 0.5 * std::sqrt(3.0) * side}});
}

Complex triangle_regular(int m, int n, int which, Vec2 pt, double side)
{
    if (which != 1 && which != 2) fail(ErrorCode::InvalidArgument, "which is 1 or 2");
    if ((m - n) % 2 != 0)
        fail(ErrorCode::ParityViolation, "regular triangle levels need m and n both even or both odd");
    const double s = side / 3.0;
    const double x = pt.x / s, y = pt.y / s;
    const double r3 = std::sqrt(3.0);
    const double tol = 1e-9 * 3.0;
    if (y < -tol || r3 * x - y < -tol || r3 * (3.0 - x) - y < -tol)
        fail(ErrorCode::OutsideDomain, "point outside the triangle");
    // phases in the scaled coordinates x = pt.x / s, y = pt.y / s
    const double km = m * pi / s, kn = n * pi / s;
    const Linear a{2.0 * km / 3.0, 0.0}, b{0.0, 2.0 * kn / r3};
    const Linear c1{km / 3.0, km * r3 / 3.0}, d1{kn, -kn / r3};
    const Linear c2{km / 3.0, -km * r3 / 3.0}, d2{kn, kn / r3};
    if (which == 1)
        return sin_at(a, pt) * sin_at(b, pt) - sin_at(c1, pt) * sin_at(d1, pt) + sin_at(c2, pt) * sin_at(d2, pt);
    return cos_at(a, pt) * sin_at(b, pt) + cos_at(c1, pt) * sin_at(d1, pt) - cos_at(c2, pt) * sin_at(d2, pt);
}

FieldGenerator triangle_regular_field(int m, int n, int which, double side)
{
    FieldGenerator g;
    g.name = "triangle_regular_" + std::to_string(which);
    g.kind = SpectrumKind::TriangleRegular;
    g.energy = triangle_regular_spectrum(m, n, side).E;
    g.domain = equilateral_triangle(side);
    g.eval = [=](Vec2 pt) { return triangle_regular(m, n, which, pt, side); };
    return g;
}

Complex triangle_singular(int m, int n, Vec2 pt, double side)
{
    if (m < 1 || n < 1) fail(ErrorCode::InvalidArgument, "quantum numbers start at 1");
    const double x = pt.x / side, y = pt.y / side;
    const double r3 = std::sqrt(3.0);
    const bool inside = y >= -1e-12 && r3 * x - y >= -1e-12 && r3 * (1.0 - x) - y >= -1e-12;
    if (!inside) return 0.0;
    double v = 0.0;
    const double km = m * pi / side, kn = n * pi / side;
    if (x < 0.5) v += sin_at({0.0, 2.0 * km / r3}, pt) * sin_at({2.0 * kn, 0.0}, pt);
    if (y > x / r3) v -= sin_at({km, km / r3}, pt) * sin_at({-kn, kn * r3}, pt);
    return v;
}

FieldGenerator triangle_singular_field(int m, int n, double side)
{
    FieldGenerator g;
    g.name = "triangle_singular";
    g.kind = SpectrumKind::TriangleSingular;
    g.energy = triangle_singular_spectrum(m, n, side).E;
    g.domain = equilateral_triangle(side);
    g.eval = [=](Vec2 pt) { return triangle_singular(m, n, pt, side); };
    g.regular = false;
    const double r3 = std::sqrt(3.0);
    g.piece_boundaries.push_back({{0.5 * side, 0.0}, {0.5 * side, 0.5 * r3 * side}});
    g.piece_boundaries.push_back({{0.0, 0.0}, {side, side / r3}});
    return g;
}

}  // namespace billiard
