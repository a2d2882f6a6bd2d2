#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gti {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ArgumentError : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct EmptyGraphError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

// Shape mismatch between a tensor and what a layer expects.
struct ShapeError : Error {
    using Error::Error;
};

// Operation invoked in the wrong lifecycle state (backward without forward, untrained model...).
struct StateError : Error {
    using Error::Error;
};

struct NumericError : Error {
    using Error::Error;
};

}  // namespace gti
