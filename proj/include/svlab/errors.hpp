#pragma once

#include <stdexcept>
#include <string>

namespace svlab {

// Parameter outside the mathematical domain of an operation (no wells, bad window, ...).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Discretization too small / too coarse for the requested problem.
struct SizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Target value below the accuracy floor of the active scalar kind.
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Residual targets not met within the iteration budget.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad CLI flag / config file entry.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace svlab
