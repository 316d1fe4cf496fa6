#pragma once

#include <stdexcept>
#include <string>

namespace polybgk {

// Base for all model/solver failures so callers can catch one type at the CLI
// boundary and turn it into a nonzero exit code.
struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 1 - nu + nu*theta fell below the usable threshold.
struct DegenerateFrequency : ModelError {
    using ModelError::ModelError;
};

// A theta-dependent bound was requested at theta = 0, where it blows up.
struct ThetaZero : ModelError {
    using ModelError::ModelError;
};

struct InvalidGrid : ModelError {
    using ModelError::ModelError;
};

struct NegativeInput : ModelError {
    using ModelError::ModelError;
};

struct CutoffTooSmall : ModelError {
    using ModelError::ModelError;
};

// Cell density below the vacuum floor; macroscopic fields are undefined there.
struct VacuumCell : ModelError {
    using ModelError::ModelError;
};

// Temperature tensor lost positive definiteness (discretization artifact).
struct NonSPDTensor : ModelError {
    using ModelError::ModelError;
};

struct CorrectionDiverged : ModelError {
    using ModelError::ModelError;
};

struct ParseError : ModelError {
    using ModelError::ModelError;
};

struct ValidationError : ModelError {
    using ModelError::ModelError;
};

struct IoError : ModelError {
    using ModelError::ModelError;
};

} // namespace polybgk
