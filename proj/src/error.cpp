#include "billiard/error.hpp"

namespace billiard {

const char* error_name(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SelfIntersecting: return "SelfIntersecting";
    case ErrorCode::AngleNotRational: return "AngleNotRational";
    case ErrorCode::AngleMismatch: return "AngleMismatch";
    case ErrorCode::GrazingIncidence: return "GrazingIncidence";
    case ErrorCode::NoIntersection: return "NoIntersection";
    case ErrorCode::AnglesDontSumToPi: return "AnglesDontSumToPi";
    case ErrorCode::OrbitOverflow: return "OrbitOverflow";
    case ErrorCode::NotClosedAfterMaxIter: return "NotClosedAfterMaxIter";
    case ErrorCode::NonIntegerGenus: return "NonIntegerGenus";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::NotPeriodic: return "NotPeriodic";
    case ErrorCode::BundleNotRegular: return "BundleNotRegular";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::NotCommensurate: return "NotCommensurate";
    case ErrorCode::DegenerateChannel: return "DegenerateChannel";
    case ErrorCode::ParityViolation: return "ParityViolation";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::PointOnPieceBoundary: return "PointOnPieceBoundary";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code)
{
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace billiard
