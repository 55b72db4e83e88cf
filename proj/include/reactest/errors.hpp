#pragma once

#include <stdexcept>
#include <string>

namespace reactest {

// Raised when an operation would exceed a configured size budget
// (polynomial term count, number of enumerated tests).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised by the text parsers; carries the 1-based line (0 when unknown).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message)
        : std::runtime_error(line == 0 ? message
                                       : "line " + std::to_string(line) + ": " + message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A black box answered outside the request/reply protocol.
class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace reactest
