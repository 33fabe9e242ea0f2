#pragma once

#include <stdexcept>
#include <string>

namespace wolffkit {

/// Argument outside the mathematical domain of an operation (t < 0, θ ∉ (0,1), ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Query outside the sampled range of a tabulated N-function.
class ExtrapolationError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Result not representable as a finite double.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Tabulated data violating monotonicity or convexity, or an N-function whose
/// growth indices leave (1, ∞).
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed run configuration. `where` is a JSON pointer or "line:col".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string where, const std::string& what)
        : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

}  // namespace wolffkit
