#include <cmath>
#include <numbers>

#include "billiard/error.hpp"
#include "billiard/swf.hpp"

namespace billiard {

namespace {

constexpr double pi = std::numbers::pi;

void require_indices(int m, int n)
{
    if (m < 1 || n < 1) fail(ErrorCode::InvalidArgument, "quantum numbers start at 1");
}

}  // namespace

const char* to_string(SpectrumKind k)
{
    switch (k) {
    case SpectrumKind::RectGeneric: return "RectGeneric";
    case SpectrumKind::RectBouncing: return "RectBouncing";
    case SpectrumKind::RectChannel: return "RectChannel";
    case SpectrumKind::RectDegenerateRegular: return "RectDegenerateRegular";
    case SpectrumKind::BrokenRectBouncing: return "BrokenRectBouncing";
    case SpectrumKind::LShapeSuperscar: return "LShapeSuperscar";
    case SpectrumKind::TriangleRegular: return "TriangleRegular";
    case SpectrumKind::TriangleSingular: return "TriangleSingular";
    case SpectrumKind::ChannelGeneric: return "ChannelGeneric";
    case SpectrumKind::PentagonGallery: return "PentagonGallery";
    case SpectrumKind::PentagonStar: return "PentagonStar";
    case SpectrumKind::DeformedPentagonWide: return "DeformedPentagonWide";
    case SpectrumKind::DeformedPentagonNarrow: return "DeformedPentagonNarrow";
    }
    return "?";
}

SpectrumEntry rect_generic_spectrum(double a, double b, int m, int n)
{
    require_indices(m, n);
    if (a <= 0 || b <= 0) fail(ErrorCode::InvalidArgument, "side lengths must be positive");
    const double E = 0.5 * pi * pi * (double(m) * m / (a * a) + double(n) * n / (b * b));
    return {SpectrumKind::RectGeneric, m, n, E, 1};
}

SpectrumEntry rect_bouncing_spectrum(double a, double b, int m, int n)
{
    require_indices(m, n);
    if (a <= 0 || b <= 0) fail(ErrorCode::InvalidArgument, "side lengths must be positive");
    const double py = n * pi / b;
    const double px = m * pi / a;
    return {SpectrumKind::RectBouncing, m, n, 0.5 * (py * py + px * px), 1};
}

SpectrumEntry channel_spectrum(double D_half, double w, int m, int n)
{
    require_indices(m, n);
    if (!(D_half > 0) || !(w > 0)) fail(ErrorCode::DegenerateChannel, "channel needs positive length and width");
    const double p = n * pi / D_half;
    const double E = 0.5 * p * p + (m * pi) * (m * pi) / (2.0 * w * w);
    return {SpectrumKind::ChannelGeneric, m, n, E, 1};
}

SpectrumEntry rect_channel_spectrum(double a, double b, int p, int q, int m, int n)
{
    require_indices(m, n);
    const double D = std::hypot(q * a, p * b);
    const double E = 0.5 * pi * pi * (double(n) * n / (D * D) + double(m) * m * D * D / (a * a * b * b));
    return {SpectrumKind::RectChannel, m, n, E, 2};
}

SpectrumEntry lshape_superscar_spectrum(const LShapeGeometry& g, int m, int n)
{
    require_indices(m, n);
    const double alpha = std::atan2(g.height, g.column);
    const double D = std::hypot(g.height, g.column);
    const double w = g.column * std::sin(alpha) - g.strip * std::cos(alpha);
    if (!(w > 0)) fail(ErrorCode::DegenerateChannel, "the lower strip closes the channel");
    const double E = 0.5 * pi * pi * (double(n) * n / (D * D) + double(m) * m / (w * w));
    return {SpectrumKind::LShapeSuperscar, m, n, E, 2};
}

SpectrumEntry triangle_regular_spectrum(int m, int n, double side)
{
    require_indices(m, n);
    if ((m - n) % 2 != 0)
        fail(ErrorCode::ParityViolation, "regular triangle levels need m and n both even or both odd");
    const double s = side / 3.0;
    const double E = 2.0 * pi * pi / 9.0 * (double(m) * m + 3.0 * n * n) / (s * s);
    return {SpectrumKind::TriangleRegular, m, n, E, 2};
}

SpectrumEntry triangle_singular_spectrum(int m, int n, double side)
{
    require_indices(m, n);
    const double E = 2.0 * pi * pi / 3.0 * (double(m) * m + 3.0 * n * n) / (side * side);
    return {SpectrumKind::TriangleSingular, m, n, E, 3};
}

PentagonChannelData pentagon_channel_data(PentagonFamily family)
{
    const double c10 = std::cos(pi / 10), s10 = std::sin(pi / 10);
    switch (family) {
    case PentagonFamily::Gallery: return {5.0 * std::cos(pi / 5), std::sin(pi / 5)};
    case PentagonFamily::Star: return {3.0 * c10 + 2.0 * std::sin(pi / 5), s10};
    case PentagonFamily::DeformedWide: return {2.0 / std::tan(pi / 10) + c10, s10};
    case PentagonFamily::DeformedNarrow: return {2.0 * std::tan(pi / 10) + 3.0 * c10, s10};
    }
    fail(ErrorCode::InvalidArgument, "unknown pentagon family");
}

SpectrumEntry pentagon_spectrum(PentagonFamily family, int m, int n)
{
    require_indices(m, n);
    const PentagonChannelData d = pentagon_channel_data(family);
    if (family == PentagonFamily::Gallery && (m - n) % 2 != 0)
        fail(ErrorCode::ParityViolation, "whispering gallery levels need m and n both even or both odd");
    const double E = 0.5 * pi * pi * (double(m) * m / (d.D_half * d.D_half) + double(n) * n / (d.w * d.w));
    SpectrumKind kind = SpectrumKind::PentagonGallery;
    switch (family) {
    case PentagonFamily::Gallery: kind = SpectrumKind::PentagonGallery; break;
    case PentagonFamily::Star: kind = SpectrumKind::PentagonStar; break;
    case PentagonFamily::DeformedWide: kind = SpectrumKind::DeformedPentagonWide; break;
    case PentagonFamily::DeformedNarrow: kind = SpectrumKind::DeformedPentagonNarrow; break;
    }
    return {kind, m, n, E, family == PentagonFamily::Star ? 5 : 2};
}

}  // namespace billiard
