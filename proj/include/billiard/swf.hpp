#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <functional>
#include <string>
#include <vector>

#include "billiard/geometry.hpp"
#include "billiard/rational.hpp"
#include "billiard/skeleton.hpp"

namespace billiard {

using Complex = std::complex<double>;

enum class SpectrumKind {
    RectGeneric,
    RectBouncing,
    RectChannel,
    RectDegenerateRegular,
    BrokenRectBouncing,
    LShapeSuperscar,
    TriangleRegular,
    TriangleSingular,
    ChannelGeneric,
    PentagonGallery,
    PentagonStar,
    DeformedPentagonWide,
    DeformedPentagonNarrow,
};

const char* to_string(SpectrumKind k);

struct SpectrumEntry {
    SpectrumKind kind = SpectrumKind::RectGeneric;
    int m = 1;
    int n = 1;
    double E = 0.0;
    int degeneracy = 1;
};

// Plus is the sine-type standing wave, Minus the cosine-type one, Running the complex field.
enum class Variant { Plus, Minus, Running };

struct Segment {
    Vec2 a;
    Vec2 b;
};

double distance_to_segment(Vec2 p, const Segment& s);

// A semiclassical wave function on a polygon. `eval` accepts points of the closed
// domain; `piece_boundaries` are the lines across which the field is only piecewise analytic.
struct FieldGenerator {
    std::string name;
    SpectrumKind kind = SpectrumKind::RectGeneric;
    double energy = 0.0;
    Polygon domain;
    std::function<Complex(Vec2)> eval;
    std::vector<Segment> piece_boundaries;
    bool regular = true;

    Complex operator()(Vec2 p) const;
};

SpectrumEntry rect_generic_spectrum(double a, double b, int m, int n);
Complex rect_generic_swf(double a, double b, int m, int n, Vec2 p);
FieldGenerator rect_generic_field(double a, double b, int m, int n);

SpectrumEntry rect_bouncing_spectrum(double a, double b, int m, int n);
// Standing bouncing-ball mode between the horizontal sides.
FieldGenerator rect_bouncing_field(double a, double b, int m, int n);

// n counts longitudinal half waves over D_half, m transverse ones over w.
SpectrumEntry channel_spectrum(double D_half, double w, int m, int n);

SpectrumEntry rect_channel_spectrum(double a, double b, int p, int q, int m, int n);
Complex rect_channel_swf(double a, double b, int p, int q, int m, int n, Variant variant, Vec2 pt);
FieldGenerator rect_channel_field(double a, double b, int p, int q, int m, int n, Variant variant);

// Field built on any periodic channel by tracing each point back to the reference crossing.
Complex channel_swf(const Polygon& poly, const PeriodicChannel& ch, int m, int n, Variant variant, Vec2 pt);
FieldGenerator channel_field(const Polygon& poly, const PeriodicChannel& ch, int m, int n, Variant variant);

struct DegenerateRegular {
    SpectrumEntry entry;
    FieldGenerator phi1;
    FieldGenerator phi2;
    int k0 = 1;
    int l0 = 1;
};

DegenerateRegular rect_degenerate_regular(double a, double b, int p, int q, int m, int n);
// Checks the two-term energy balance exactly for squared side lengths a2, b2 that satisfy
// (p b)^2 l0 = (q a)^2 k0. Throws NotCommensurate when they do not.
bool degeneracy_balance_exact(Rational a2, Rational b2, int p, int q, int k0, int l0, int m, int n);

struct BrokenRectMode {
    SpectrumEntry entry;
    FieldGenerator field;
    int n0 = 1, l0 = 1, m0 = 1, k0 = 1;
};

// L-shaped region [0,a]x[0,b] joined with [0,c]x[0,d], a > c, d > b.
BrokenRectMode broken_rect_bouncing(double a, double b, double c, double d, int m, int n);

struct LShapeGeometry {
    double width = 2.0;   // total width of the lower strip
    double strip = 0.5;   // height of the lower strip
    double column = 1.0;  // width of the column on the left
    double height = 1.0;  // height of the column
};

Polygon lshape_polygon(const LShapeGeometry& g);
SpectrumEntry lshape_superscar_spectrum(const LShapeGeometry& g, int m, int n);
FieldGenerator lshape_superscar(const LShapeGeometry& g, int m, int n, Variant variant);

// Equilateral triangle with vertices (0,0), (s,0), (s/2, s*sqrt(3)/2).
Polygon equilateral_triangle(double side);
SpectrumEntry triangle_regular_spectrum(int m, int n, double side = 3.0);
Complex triangle_regular(int m, int n, int which, Vec2 pt, double side = 3.0);
FieldGenerator triangle_regular_field(int m, int n, int which, double side = 3.0);

SpectrumEntry triangle_singular_spectrum(int m, int n, double side = 1.0);
Complex triangle_singular(int m, int n, Vec2 pt, double side = 1.0);
FieldGenerator triangle_singular_field(int m, int n, double side = 1.0);

struct PentagonChannelData {
    double D_half;
    double w;
};
// Channels of the regular pentagon (gallery: the five-bundle Moebius channel, star: the vertical
// channel) and of the two deformed pentagons.
enum class PentagonFamily { Gallery, Star, DeformedWide, DeformedNarrow };
PentagonChannelData pentagon_channel_data(PentagonFamily family);
// m counts longitudinal, n transverse half waves as in the closed forms.
SpectrumEntry pentagon_spectrum(PentagonFamily family, int m, int n);

struct GridSpec {
    double x0 = 0.0;
    double y0 = 0.0;
    double h = 0.01;
    int nx = 0;
    int ny = 0;
};

// Grid of nx x ny cells covering the polygon bounding box.
GridSpec cover_grid(const Polygon& poly, int nx, int ny);

struct Wavefield {
    GridSpec grid;
    std::vector<Complex> values;  // row-major, index iy * nx + ix, cell centers
    std::vector<std::uint8_t> mask;
    bool coarse = false;  // fewer than 8 cells per wavelength
};

Wavefield eval_wavefield(const FieldGenerator& gen, const GridSpec& grid);

double boundary_residual(const FieldGenerator& gen, int samples_per_side);

// max |Lap psi + 2 E psi| / (E |psi| + 1) over the points, 5-point stencil with
// step 1e-5 * diameter. Throws PointOnPieceBoundary for points too close to a piece edge.
double helmholtz_residual(const FieldGenerator& gen, double E, std::span<const Vec2> points);

// Interior points at least `margin` away from the boundary and every piece edge.
std::vector<Vec2> sample_piece_interior(const FieldGenerator& gen, int count, std::uint64_t seed, double margin);

struct GradientJump {
    double max_jump = 0.0;  // relative to sqrt(2E) * max |psi|
    int samples = 0;
};

// One-sided gradients extrapolated onto the segment from both sides.
GradientJump gradient_jump(const FieldGenerator& gen, const Segment& line, int samples);

double field_scale(const FieldGenerator& gen);

}  // namespace billiard
