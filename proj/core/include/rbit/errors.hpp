#pragma once

#include <stdexcept>
#include <string>

namespace rbit {

// Argument and domain violations use std::invalid_argument / std::domain_error.
// The types below cover the remaining failure classes.

/// A request exceeds what can be enumerated or represented (bit counts,
/// cell counts, overflow guards).
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// A recursion produced a non-finite state.
class NumericFailure : public std::runtime_error {
public:
    NumericFailure(const std::string& what, std::size_t step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Bad experiment or CLI configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal invariant does not hold; never clipped silently.
class InvariantFailure : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace rbit
