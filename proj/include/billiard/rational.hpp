#pragma once

#include <cstdint>
#include <optional>

#include <boost/rational.hpp>

namespace billiard {

using Rational = boost::rational<std::int64_t>;

// Best continued-fraction convergent of x with denominator <= max_den that lies
// within tol of x, or nullopt.
std::optional<Rational> approximate_rational(double x, std::int64_t max_den, double tol);

std::int64_t gcd64(std::int64_t a, std::int64_t b);

// Solves a*x - b*y = c for integers. Requires gcd(a,b) | c.
std::pair<std::int64_t, std::int64_t> solve_linear_diophantine(std::int64_t a, std::int64_t b,
                                                                std::int64_t c);

}  // namespace billiard
