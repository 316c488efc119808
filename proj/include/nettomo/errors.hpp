#pragma once

#include <stdexcept>
#include <string>

namespace nettomo {

// Error hierarchy. The CLI maps each family to an exit code.
struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical routine failed (eigensolver non-convergence and similar).
struct ComputationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two independent routes to the same quantity disagree.
struct ConsistencyError : std::logic_error {
    using std::logic_error::logic_error;
};

// The identified model cannot support the requested step
// (not full order, noisy boundary block, log branch ambiguity).
struct IdentificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A bounded enumeration hit its cap.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nettomo
