#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fixiter {

/// Structural mismatch between operands (variant kind, dimension, grid geometry).
struct structural_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Argument outside its mathematical domain (weight outside [0,1], delta >= 1, ...).
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Invalid run configuration (missing divergence flag, bad scheme routing, ...).
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A theorem hypothesis required by the invoked operation does not hold.
struct hypothesis_violation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Non-finite value or failed convergence; carries the offending index.
struct numerical_error : std::runtime_error {
    std::size_t index;
    numerical_error(const std::string& what, std::size_t idx)
        : std::runtime_error(what), index(idx) {}
};

/// Expression or config text that does not parse; carries the position.
struct parse_error : std::runtime_error {
    std::size_t position;
    parse_error(const std::string& what, std::size_t pos)
        : std::runtime_error(what), position(pos) {}
};

} // namespace fixiter
