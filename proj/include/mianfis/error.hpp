#pragma once

#include <stdexcept>
#include <string>

namespace mianfis {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument or configuration value was violated.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Input data is well-formed but semantically inconsistent (e.g. a bag with two labels).
class DataError : public Error {
public:
    using Error::Error;
};

/// A file could not be parsed, or its structure is malformed.
class FormatError : public Error {
public:
    using Error::Error;
};

class UnsupportedVersionError : public FormatError {
public:
    using FormatError::FormatError;
};

/// Broken internal contract (shape mismatch between collaborating objects).
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace mianfis
