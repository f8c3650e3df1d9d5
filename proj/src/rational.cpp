#include "billiard/rational.hpp"

#include <cmath>
#include <numeric>
#include <tuple>

#include "billiard/error.hpp"

namespace billiard {

std::optional<Rational> approximate_rational(double x, std::int64_t max_den, double tol)
{
    if (!std::isfinite(x)) return std::nullopt;
    // convergents h/k of the continued fraction of x
    std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(x));
    std::int64_t k_prev = 0, k = 1;
    double frac = x - std::floor(x);
    for (int iter = 0; iter < 64; ++iter) {
        if (std::abs(static_cast<double>(h) / static_cast<double>(k) - x) <= tol)
            return Rational(h, k);
        if (frac < 1e-300) break;
        const double inv = 1.0 / frac;
        const auto a = static_cast<std::int64_t>(std::floor(inv));
        frac = inv - std::floor(inv);
        const std::int64_t h_next = a * h + h_prev;
        const std::int64_t k_next = a * k + k_prev;
        if (k_next > max_den) break;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
    }
    return std::nullopt;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::pair<std::int64_t, std::int64_t> solve_linear_diophantine(std::int64_t a, std::int64_t b,
                                                                std::int64_t c)
{
    // extended Euclid on (a, b): a*s + b*t = g
    std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        const std::int64_t quot = old_r / r;
        std::tie(old_r, r) = std::pair{r, old_r - quot * r};
        std::tie(old_s, s) = std::pair{s, old_s - quot * s};
        std::tie(old_t, t) = std::pair{t, old_t - quot * t};
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    if (old_r == 0 || c % old_r != 0) fail(ErrorCode::InvalidArgument, "no integer solution");
    const std::int64_t scale = c / old_r;
    return {old_s * scale, -old_t * scale};
}

}  // namespace billiard
