#pragma once

#include <stdexcept>
#include <string>

namespace evsat {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied argument is outside its documented domain.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Input data violates an invariant (unsorted stream, out-of-bounds event, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed file contents; the message carries a line or byte position.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Filesystem-level failure (missing file, short write, ...).
class IoError : public Error {
public:
    using Error::Error;
};

/// Geometric configuration admits no unique solution.
class DegeneracyError : public Error {
public:
    using Error::Error;
};

/// A point required to be in front of the camera has non-positive depth.
class CheiralityError : public Error {
public:
    CheiralityError(const std::string& what, std::size_t point_index)
        : Error(what), point_index_(point_index) {}

    std::size_t point_index() const noexcept { return point_index_; }

private:
    std::size_t point_index_ = 0;
};

/// Non-finite value encountered during optimization.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace evsat
