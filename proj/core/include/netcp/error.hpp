#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netcp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad caller input: out-of-range arguments, mismatched shapes, infeasible parameters.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Malformed text input. `line()` is 1-based; 0 means the error is not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace netcp
