#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "billiard/geometry.hpp"

namespace billiard {

// Directions reachable from gamma0 by reflections in every side, deduplicated at 1e-12.
std::vector<double> direction_orbit(const Polygon& poly, double gamma0);

struct Bundle {
    int side_index = 0;
    double u = 0.0;  // arc length of the base start
    double l = 0.0;  // base length
    double gamma = 0.0;
    double alpha = 0.0;  // gamma - beta, in (0, pi)
    int direction_index = 0;

    double local_start(const Polygon& poly) const { return u - poly.side(side_index).s0; }
};

struct CompoundBundle {
    double gamma = 0.0;
    std::vector<int> members;  // indices into Skeleton::bundles
    bool singular = false;     // glued across a vertex shadow
};

enum class SkeletonKind { RegularGlobal, SingularGlobal, SingularPeriodic };
enum class SurfaceKind { Torus, CylinderLike, MoebiusLike, ClosedGenusG };

const char* to_string(SkeletonKind k);
const char* to_string(SurfaceKind k);

struct SkeletonClass {
    SkeletonKind kind = SkeletonKind::SingularGlobal;
    SurfaceKind surface = SurfaceKind::ClosedGenusG;
    std::optional<int> genus;
    std::string diagnostics;
};

struct Skeleton {
    Polygon polygon;
    std::vector<double> directions;
    std::vector<Bundle> bundles;
    std::vector<CompoundBundle> reduced_bundles;
    bool closed = false;
    int rounds = 0;
};

Skeleton build_skeleton(const Polygon& poly, double gamma0);
SkeletonClass classify(const Skeleton& skel);

// g = 1 + (N/4) * sum (p_k - 1)/q_k in exact arithmetic.
int genus(const Polygon& poly, int compound_bundles);

struct PeriodicChannel {
    double D = 0.0;       // full period: rays return with preserved orientation
    double D_half = 0.0;  // longitudinal quantization length
    double w = 0.0;
    std::array<BouncePath, 2> sd_pair;
    int n_bundles = 0;
    double direction = 0.0;  // incidence angle on the reference side
    bool moebius = false;
    int reflections = 0;  // reflections per full period
    // reference crossing used to parametrize the channel
    int ref_side = 0;
    double s_lo = 0.0;  // local coordinates on the reference side
    double s_hi = 0.0;
    double gamma_ref = 0.0;
    std::vector<double> directions;
};

PeriodicChannel rect_channel(double a, double b, int p, int q);

std::vector<BouncePath> find_singular_diagonals(const Polygon& poly, double gamma, int max_bounces);
// Same search restricted to the given directions.
std::vector<BouncePath> find_singular_diagonals(const Polygon& poly, std::span<const double> directions,
                                                int max_bounces);

struct ChannelSeed {
    int side = 0;
    double offset = 0.0;  // local coordinate along the side
};

PeriodicChannel channel_from_direction(const Polygon& poly, double gamma,
                                       std::optional<ChannelSeed> seed = std::nullopt);

struct DeltaCheck {
    double max_deviation = 0.0;
    bool pass = false;
    int target_side = -1;
};

DeltaCheck delta_constancy_check(const Polygon& poly, const Bundle& bundle, int samples);

// Splits a bundle at vertex shadows so each piece maps onto a single side.
std::vector<Bundle> regular_pieces(const Polygon& poly, const Bundle& bundle);

struct ChannelQuantization {
    double D_half = 0.0;
    double w = 0.0;
    double momentum(int n) const;             // n pi / D_half
    double transverse_energy(int m) const;    // (m pi)^2 / (2 w^2)
    double energy(int m, int n) const;
};

ChannelQuantization quantize_channel(const PeriodicChannel& ch);

}  // namespace billiard
