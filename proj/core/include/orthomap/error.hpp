#pragma once

#include <stdexcept>
#include <string>

namespace orthomap {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input failed a range, format or consistency check.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Matrix or vector shapes disagree.
class DimensionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Attribute names are missing, duplicated or malformed.
class SchemaError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A file could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: singular systems, divergence, non-finite results.
class NumericalError : public Error {
public:
    using Error::Error;
};

class SolverError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DivergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace orthomap
