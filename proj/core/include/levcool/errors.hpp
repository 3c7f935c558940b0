#pragma once

#include <stdexcept>
#include <string>

namespace levcool {

// CLI exit-code mapping: ConfigError -> 1, ConvergenceError -> 2, InstabilityError -> 3.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonRayleighError : ConfigError {
    using ConfigError::ConfigError;
};

struct EquilibriumError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InstabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularMatrixError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrackingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace levcool
