#pragma once

#include <stdexcept>
#include <string>

namespace nme {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: wrong shape, non-finite entries, broken invariants.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A hypothesis required by an operation does not hold (and was not forced).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Breakdown during a numerical procedure, e.g. an iterate leaving the
/// positive definite cone or a non-settling spectral radius estimate.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A candidate solution or witness failed its certificate.
class VerificationError : public Error {
public:
    using Error::Error;
};

}  // namespace nme
