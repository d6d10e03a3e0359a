#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace immersion {

enum class ErrorKind {
    UnknownVertex,
    UnknownEdge,
    SameEdge,
    EdgesNotAdjacentAtVia,
    NotSimple,
    OddDegree,
    InvalidPairing,
    DigestMismatch,
    LiftViolation,
    PreconditionViolated,
    HallViolated,
    Infeasible,
    OddTotal,
    TargetUnreached,
    NoHighDegreeVertex,
    DegreeTooLow,
    InvariantBreach,
    BadParams,
    ParseError,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace immersion
