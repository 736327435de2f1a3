#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace starfn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression or definition file. `position` is a 0-based
/// character offset into the parsed text.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at offset " + std::to_string(position) + ")"), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// An argument violates an operation's precondition.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative numerical method failed to converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace starfn
