#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace phough {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter vector lies outside the admissible set of its family.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// Non-finite or otherwise unusable numeric input.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A cell multi-index or linear index outside the grid.
class InvalidIndex : public Error {
public:
    using Error::Error;
};

/// The dependent parameter cannot be solved for (vanishing coefficient).
class NoSolution : public Error {
public:
    using Error::Error;
};

class EmptyDataset : public Error {
public:
    using Error::Error;
};

/// Attempt to remove point layers that are not currently active.
class InvalidRemoval : public Error {
public:
    using Error::Error;
};

/// Inconsistent grid, family or detector configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Point set too degenerate for the requested geometry (e.g. all collinear).
class DegenerateInput : public Error {
public:
    using Error::Error;
};

class InvalidImage : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed binary or text file; carries the byte offset of the problem.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Malformed line-oriented text; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace phough
