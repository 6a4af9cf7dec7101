#pragma once

#include <stdexcept>

namespace oblique {

/// Malformed or out-of-contract input (dimension mismatch, empty data, ...).
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A numerically meaningful failure: singular cross-Gram, singular symbol,
/// rank deficiency beyond tolerance, refinement hypotheses not met.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace oblique
