// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace holder {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (negative t, point outside the box).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Evaluation outside a tabulated range without an extrapolation policy.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent arguments.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Operation not defined for the requested geometry or target (e.g. vector-valued envelopes).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Input file could not be parsed. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Approximation parameters could not be selected. `clause()` names the failing condition.
class PlanError : public Error {
public:
    PlanError(std::string clause, const std::string& message)
        : Error(clause + ": " + message), clause_(std::move(clause)) {}

    [[nodiscard]] const std::string& clause() const noexcept { return clause_; }

private:
    std::string clause_;
};

}  // namespace holder
