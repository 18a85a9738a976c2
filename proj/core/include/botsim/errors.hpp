#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace botsim {

/// Invalid configuration or argument supplied to a model or statistics routine.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operation requested on an object in the wrong lifecycle state.
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Malformed input file. Carries the 1-based line number of the offending row.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Design matrix without full column rank. Names the first column found to be dependent.
class SingularityError : public std::runtime_error {
public:
    SingularityError(std::size_t column, const std::string& what)
        : std::runtime_error(what), column_(column) {}

    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

}  // namespace botsim
