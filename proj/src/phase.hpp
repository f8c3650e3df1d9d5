#pragma once

#include <cmath>
#include <complex>

#include "billiard/geometry.hpp"

namespace billiard::detail {

// ax * x + ay * y + c, carried in double-double so that finite differences of the
// resulting sines see only the final rounding.
struct Linear {
    double ax = 0.0;
    double ay = 0.0;
    double c = 0.0;
};

struct Angle {
    double hi = 0.0;
    double lo = 0.0;
};

inline void two_sum(double a, double b, double& s, double& e)
{
    s = a + b;
    const double bb = s - a;
    e = (a - (s - bb)) + (b - bb);
}

inline Angle at(const Linear& f, Vec2 p)
{
    const double p1 = f.ax * p.x, e1 = std::fma(f.ax, p.x, -p1);
    const double p2 = f.ay * p.y, e2 = std::fma(f.ay, p.y, -p2);
    double s, e3, h, e4;
    two_sum(p1, p2, s, e3);
    two_sum(s, f.c, h, e4);
    Angle r;
    two_sum(h, e1 + e2 + e3 + e4, r.hi, r.lo);
    return r;
}

inline double sin_at(const Linear& f, Vec2 p)
{
    const Angle a = at(f, p);
    return std::sin(a.hi) + a.lo * std::cos(a.hi);
}

inline double cos_at(const Linear& f, Vec2 p)
{
    const Angle a = at(f, p);
    return std::cos(a.hi) - a.lo * std::sin(a.hi);
}

inline std::complex<double> cis_at(const Linear& f, Vec2 p)
{
    const Angle a = at(f, p);
    const double c = std::cos(a.hi), s = std::sin(a.hi);
    return {c - a.lo * s, s + a.lo * c};
}

}  // namespace billiard::detail
