#ifndef RACEWAY_ERRORS_HPP
#define RACEWAY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace raceway {

/// Base class for failures of the physical/numerical model (CLI exit code 3).
struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Base class for configuration problems (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoCompensationRoot : ModelError {
    using ModelError::ModelError;
};

struct NegativeBiomass : ModelError {
    using ModelError::ModelError;
};

struct NonPositiveHeight : ModelError {
    using ModelError::ModelError;
};

struct SupercriticalFlow : ModelError {
    using ModelError::ModelError;
};

struct FixedPointDivergence : ModelError {
    using ModelError::ModelError;
};

struct DimensionMismatch : ModelError {
    using ModelError::ModelError;
};

struct InvalidInitialShape : ModelError {
    using ModelError::ModelError;
};

struct ParseError : ConfigError {
    using ConfigError::ConfigError;
};

struct UnknownKey : ConfigError {
    using ConfigError::ConfigError;
};

struct UnitViolation : ConfigError {
    using ConfigError::ConfigError;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace raceway

#endif  // RACEWAY_ERRORS_HPP
