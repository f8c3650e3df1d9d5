#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "billiard/error.hpp"
#include "billiard/parallel.hpp"
#include "billiard/swf.hpp"

namespace billiard {

namespace {

double min_piece_distance(const FieldGenerator& gen, Vec2 p, const Segment* skip = nullptr)
{
    double best = 1e300;
    for (const Segment& s : gen.piece_boundaries) {
        if (&s == skip) continue;
        best = std::min(best, distance_to_segment(p, s));
    }
    return best;
}

bool strictly_inside(const Polygon& poly, Vec2 p, double margin)
{
    return poly.contains(p) && poly.distance_to_boundary(p) > margin;
}

}  // namespace

GridSpec cover_grid(const Polygon& poly, int nx, int ny)
{
    if (nx < 1 || ny < 1) fail(ErrorCode::InvalidArgument, "grid needs at least one cell per axis");
    const auto [lo, hi] = poly.bounding_box();
    const double h = std::max((hi.x - lo.x) / nx, (hi.y - lo.y) / ny);
    return {lo.x, lo.y, h, nx, ny};
}

Wavefield eval_wavefield(const FieldGenerator& gen, const GridSpec& grid)
{
    if (grid.nx < 1 || grid.ny < 1 || !(grid.h > 0)) fail(ErrorCode::InvalidArgument, "empty grid");
    Wavefield out;
    out.grid = grid;
    const auto cells = static_cast<std::size_t>(grid.nx) * static_cast<std::size_t>(grid.ny);
    out.values.assign(cells, Complex(0.0));
    out.mask.assign(cells, 0);
    parallel_for(static_cast<std::size_t>(grid.ny), [&](std::size_t iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            const Vec2 p{grid.x0 + (ix + 0.5) * grid.h, grid.y0 + (static_cast<double>(iy) + 0.5) * grid.h};
            if (!gen.domain.contains(p)) continue;
            const std::size_t idx = iy * static_cast<std::size_t>(grid.nx) + static_cast<std::size_t>(ix);
            out.mask[idx] = 1;
            out.values[idx] = gen.eval(p);
        }
    });
    if (gen.energy > 0) {
        const double wavelength = 2.0 * std::numbers::pi / std::sqrt(2.0 * gen.energy);
        out.coarse = wavelength / grid.h < 8.0;
    }
    return out;
}

double boundary_residual(const FieldGenerator& gen, int samples_per_side)
{
    if (samples_per_side < 2) fail(ErrorCode::InvalidArgument, "need at least two samples per side");
    double worst = 0.0;
    for (const Side& s : gen.domain.sides()) {
        for (int i = 0; i < samples_per_side; ++i) {
            const double t = static_cast<double>(i) / (samples_per_side - 1);
            worst = std::max(worst, std::abs(gen.eval(s.a + t * (s.b - s.a))));
        }
    }
    return worst;
}

double helmholtz_residual(const FieldGenerator& gen, double E, std::span<const Vec2> points)
{
    // power of two so that p +- eps is exact
    const double eps = std::exp2(std::round(std::log2(1e-5 * gen.domain.diameter())));
    double worst = 0.0;
    for (const Vec2& p : points) {
        if (min_piece_distance(gen, p) <= 2 * eps || !strictly_inside(gen.domain, p, 2 * eps))
            fail(ErrorCode::PointOnPieceBoundary, "sample point too close to a piece edge");
        const Complex c = gen.eval(p);
        const Complex lap = (gen.eval({p.x + eps, p.y}) + gen.eval({p.x - eps, p.y}) + gen.eval({p.x, p.y + eps}) +
                             gen.eval({p.x, p.y - eps}) - 4.0 * c) /
                            (eps * eps);
        worst = std::max(worst, std::abs(lap + 2.0 * E * c) / (E * std::abs(c) + 1.0));
    }
    return worst;
}

std::vector<Vec2> sample_piece_interior(const FieldGenerator& gen, int count, std::uint64_t seed, double margin)
{
    std::mt19937_64 rng(seed);
    const auto [lo, hi] = gen.domain.bounding_box();
    std::uniform_real_distribution<double> ux(lo.x, hi.x), uy(lo.y, hi.y);
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    long attempts = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++attempts > 1000L * std::max(count, 1)) fail(ErrorCode::Internal, "could not place interior samples");
        const Vec2 p{ux(rng), uy(rng)};
        if (strictly_inside(gen.domain, p, margin) && min_piece_distance(gen, p) > margin) out.push_back(p);
    }
    return out;
}

double field_scale(const FieldGenerator& gen)
{
    const Wavefield f = eval_wavefield(gen, cover_grid(gen.domain, 64, 64));
    double m = 0.0;
    for (const Complex& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

GradientJump gradient_jump(const FieldGenerator& gen, const Segment& line, int samples)
{
    const double diam = gen.domain.diameter();
    const double delta = 2e-4 * diam;
    const double eps = 1e-6 * diam;
    const Vec2 e = line.b - line.a;
    const double len = norm(e);
    if (!(len > 0)) fail(ErrorCode::InvalidArgument, "degenerate line");
    const Vec2 nrm{-e.y / len, e.x / len};
    const double scale = std::sqrt(2.0 * gen.energy) * field_scale(gen);
    const Segment* self = nullptr;
    for (const Segment& s : gen.piece_boundaries)
        if (norm(s.a - line.a) < 1e-12 * diam && norm(s.b - line.b) < 1e-12 * diam) self = &s;

    const auto grad = [&](Vec2 p) {
        const Complex gx = (gen.eval({p.x + eps, p.y}) - gen.eval({p.x - eps, p.y})) / (2 * eps);
        const Complex gy = (gen.eval({p.x, p.y + eps}) - gen.eval({p.x, p.y - eps})) / (2 * eps);
        return std::pair{gx, gy};
    };
    GradientJump out;
    for (int i = 0; i < samples; ++i) {
        const double t = (i + 0.5) / samples;
        const Vec2 c = line.a + t * e;
        bool usable = true;
        for (int j = -3; j <= 3 && usable; ++j) {
            if (j == 0) continue;
            const Vec2 q = c + (j * delta) * nrm;
            usable = strictly_inside(gen.domain, q, 2 * eps) && min_piece_distance(gen, q, self) > 0.5 * delta;
        }
        if (!usable) continue;
        std::pair<Complex, Complex> side[2];
        for (int s = 0; s < 2; ++s) {
            const double sign = s == 0 ? 1.0 : -1.0;
            const auto g1 = grad(c + (sign * delta) * nrm);
            const auto g2 = grad(c + (sign * 2 * delta) * nrm);
            const auto g3 = grad(c + (sign * 3 * delta) * nrm);
            side[s] = {3.0 * g1.first - 3.0 * g2.first + g3.first, 3.0 * g1.second - 3.0 * g2.second + g3.second};
        }
        const double jump = std::hypot(std::abs(side[0].first - side[1].first), std::abs(side[0].second - side[1].second));
        out.max_jump = std::max(out.max_jump, scale > 0 ? jump / scale : jump);
        ++out.samples;
    }
    return out;
}

}  // namespace billiard
