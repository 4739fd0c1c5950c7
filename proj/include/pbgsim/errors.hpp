#pragma once

#include <stdexcept>
#include <string>

namespace pbgsim {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// Point evaluation exactly at the band edge, where the density diverges.
struct SingularityError : DomainError {
    using DomainError::DomainError;
};

/// Discretization parameters that cannot produce the requested mode set.
struct ConsistencyError : Error {
    using Error::Error;
};

/// Basis state not present in the sector.
struct LookupError : Error {
    using Error::Error;
};

/// State vector or buffer not aligned with the basis.
struct ShapeError : Error {
    using Error::Error;
};

struct UnsupportedSectorError : Error {
    using Error::Error;
};

/// Invalid run configuration (bad step size, missing fields, memory cap).
struct ConfigError : Error {
    using Error::Error;
};

/// Integration breakdown: norm drift, overflow or non-finite values.
struct NumericalError : Error {
    using Error::Error;
};

}  // namespace pbgsim
