#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace glyco {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A function argument violates its precondition (non-finite value, empty sample set, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Well-formed input whose content is unusable (out-of-range glucose, duplicate timestamps).
class DataError : public Error {
public:
    using Error::Error;
};

/// All training features are equal, so the affine scaling is undefined.
class DegenerateData : public DataError {
public:
    using DataError::DataError;
};

/// Inconsistent or missing configuration. The CLI maps this to a usage exit code.
class ConfigError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace glyco
