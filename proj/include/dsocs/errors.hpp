#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dsocs {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public Error {
public:
    using Error::Error;
};

class NoConvergenceError : public Error {
public:
    using Error::Error;
};

class NoRootFoundError : public Error {
public:
    using Error::Error;
};

class AmbiguousRootError : public Error {
public:
    using Error::Error;
};

/// A constraint expression lost its meaning at the evaluated state,
/// e.g. the midpoint velocity of a curvature constraint vanished.
class ConstraintDegeneracyError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class NonpositiveValueError : public Error {
public:
    using Error::Error;
};

/// Raised by diagnostics that require an (approximate) trajectory triple.
class NotOnConstraintError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace dsocs
