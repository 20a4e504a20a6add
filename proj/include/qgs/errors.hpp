#pragma once

#include <stdexcept>
#include <string>

namespace qgs {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};
struct SingularMatrix : Error {
    using Error::Error;
};
struct ConvergenceFailure : Error {
    using Error::Error;
};
struct NoChannels : Error {
    using Error::Error;
};
struct NotSelfAdjoint : Error {
    using Error::Error;
};
struct ExceptionalPoint : Error {
    using Error::Error;
};
struct RankDeficientBlock : Error {
    using Error::Error;
};
struct DegenerateTransfer : Error {
    using Error::Error;
};
struct PortCollision : Error {
    using Error::Error;
};
struct IndexOutOfRange : Error {
    using Error::Error;
};
struct DomainViolation : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};

} // namespace qgs
