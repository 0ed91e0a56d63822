#pragma once

#include <stdexcept>
#include <string>

namespace qfractal {

/// Root of the toolkit's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: malformed config, unknown family, out-of-range parameter.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Position or parameter outside the physical domain (e.g. x outside the box).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Structurally invalid object (overlapping squares, bad window, length mismatch).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A computation that is well posed but cannot produce a finite answer.
class NumericalError : public Error {
public:
    using Error::Error;
};

class StationaryStateError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateSignalError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InsufficientScalesError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ZeroEnergyError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Velocity requested where the density is below the node threshold.
class NodeProximityError : public NumericalError {
public:
    NodeProximityError(double x, double t, double rho);
    double x;
    double t;
    double rho;
};

class InvalidStartError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace qfractal
