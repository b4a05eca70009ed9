#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace beinit {

/// Requested register or allocation exceeds the supported size.
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};

/// Operand shapes do not agree.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Input outside the mathematical domain of an operation (log of 0, zero variance, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string &what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

} // namespace beinit
