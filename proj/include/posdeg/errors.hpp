#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace posdeg {

/// Invalid arguments or malformed input (CLI exit code 1).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a real function (e.g. y < k for a binomial).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An exact computation would exceed its configured work budget.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
public:
    ParseError(std::size_t line, const std::string& what)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace posdeg
