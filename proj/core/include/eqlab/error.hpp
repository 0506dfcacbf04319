#pragma once

#include <stdexcept>
#include <string>

namespace eqlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A phase state, field or model disagree on the number of degrees of freedom.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An input violates an operation's precondition (energy below the ground
/// state, unavailable component, bad configuration value, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The energy lies inside the guard band of a critical value, where orbit
/// based quantities are ill-conditioned.
class GuardBandError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A numerical procedure could not deliver a result (no accepted samples,
/// quadrature did not converge, step cap exceeded).
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace eqlab
