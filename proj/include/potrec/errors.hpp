#pragma once

#include <stdexcept>
#include <string>

namespace potrec {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Evaluation point coincides with a singularity of a closed-form seed.
class SingularPointError : public Error {
public:
    using Error::Error;
};

/// Evaluation point is one of the four square corners (or shifts onto one).
class CornerSingularityError : public SingularPointError {
public:
    using SingularPointError::SingularPointError;
};

/// Requested degree exceeds what the library supports.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Operands with incompatible sizes.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature could not reach the requested tolerance.
class AccuracyError : public Error {
public:
    using Error::Error;
};

/// Iterative numeric procedure failed to converge.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace potrec
