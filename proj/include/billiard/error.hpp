#pragma once

#include <stdexcept>
#include <string>

namespace billiard {

// Numeric values are shared with the C API status codes.
enum class ErrorCode : int {
    Ok = 0,
    InvalidArgument = 1,
    SelfIntersecting = 2,
    AngleNotRational = 3,
    AngleMismatch = 4,
    GrazingIncidence = 5,
    NoIntersection = 6,
    AnglesDontSumToPi = 7,
    OrbitOverflow = 8,
    NotClosedAfterMaxIter = 9,
    NonIntegerGenus = 10,
    NotCoprime = 11,
    NotPeriodic = 12,
    BundleNotRegular = 13,
    OutsideDomain = 14,
    NotCommensurate = 15,
    DegenerateChannel = 16,
    ParityViolation = 17,
    GridTooCoarse = 18,
    PointOnPieceBoundary = 19,
    NoConvergence = 20,
    GridMismatch = 21,
    Internal = 22,
};

const char* error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace billiard
