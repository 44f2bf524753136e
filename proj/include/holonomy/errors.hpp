#pragma once

#include <stdexcept>
#include <string>

namespace holonomy {

enum class Err {
    NonHyperbolic,
    NotPeriodic,
    DuplicateOrbit,
    MixedSigns,
    ZeroSlope,
    WindowTooLarge,
    PathThroughSingularity,
    RectangleNotClear,
    NotOnProng,
    Blowup,
    BaseOnSingularity,
    BisectionFailure,
    NoMagnifyingOrbit,
    RadiusTooLarge,
    NotClosed,
    ResolutionMismatch,
    TruncationBoundary,
    EngineStall,
    ParseError,
};

inline const char* err_name(Err e) {
    switch (e) {
        case Err::NonHyperbolic: return "NonHyperbolic";
        case Err::NotPeriodic: return "NotPeriodic";
        case Err::DuplicateOrbit: return "DuplicateOrbit";
        case Err::MixedSigns: return "MixedSigns";
        case Err::ZeroSlope: return "ZeroSlope";
        case Err::WindowTooLarge: return "WindowTooLarge";
        case Err::PathThroughSingularity: return "PathThroughSingularity";
        case Err::RectangleNotClear: return "RectangleNotClear";
        case Err::NotOnProng: return "NotOnProng";
        case Err::Blowup: return "Blowup";
        case Err::BaseOnSingularity: return "BaseOnSingularity";
        case Err::BisectionFailure: return "BisectionFailure";
        case Err::NoMagnifyingOrbit: return "NoMagnifyingOrbit";
        case Err::RadiusTooLarge: return "RadiusTooLarge";
        case Err::NotClosed: return "NotClosed";
        case Err::ResolutionMismatch: return "ResolutionMismatch";
        case Err::TruncationBoundary: return "TruncationBoundary";
        case Err::EngineStall: return "EngineStall";
        case Err::ParseError: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(Err code, const std::string& what)
        : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}
    Err code() const { return code_; }

  private:
    Err code_;
};

// Raised when a partial-connection transport blows up mid-path; carries the
// developed position where the value escaped.
class BlowupError : public Error {
  public:
    BlowupError(double east, double north, const std::string& what)
        : Error(Err::Blowup, what), east_(east), north_(north) {}
    double east() const { return east_; }
    double north() const { return north_; }

  private:
    double east_;
    double north_;
};

}  // namespace holonomy
