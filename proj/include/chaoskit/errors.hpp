#pragma once

#include <stdexcept>
#include <string>

namespace chaoskit {

// Base for every failure raised by the library. Input-shaped problems derive
// from ValidationError; anything touching files or sockets is an IoError.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class RangeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Sequence shorter than the requested window (|s| < k).
class EmptyWindowError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class UnsupportedPermutationError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NotEulerianError : public Error {
public:
    using Error::Error;
};

class InconsistencyError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace chaoskit
