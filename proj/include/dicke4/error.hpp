#pragma once

#include <stdexcept>
#include <string>

namespace dicke4 {

// Failure categories raised by the library. The CLI maps configuration
// problems to exit code 2 and convergence problems to exit code 3.
enum class Errc {
    OrderingViolation,
    BadCouplingKeys,
    NonPositiveFrequency,
    NegativeCoupling,
    BadAtomCount,
    ChartMismatch,
    RegionInvalid,
    EqualDetuningRequired,
    EmptySector,
    InconsistentBasis,
    NoConvergence,
    NoBracket,
    BadParameterPath,
    BadConfigFile,
};

struct Error : std::runtime_error {
    Errc code;
    Error(Errc c, const std::string& what) : std::runtime_error(what), code(c) {}
};

inline bool is_config_error(Errc c) {
    switch (c) {
        case Errc::OrderingViolation:
        case Errc::BadCouplingKeys:
        case Errc::NonPositiveFrequency:
        case Errc::NegativeCoupling:
        case Errc::BadAtomCount:
        case Errc::BadParameterPath:
        case Errc::BadConfigFile:
            return true;
        default:
            return false;
    }
}

}  // namespace dicke4
