#pragma once

#include <stdexcept>
#include <string>

namespace flarebench {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raster/bitmap pair with mismatched dimensions.
struct InvalidPairError : Error {
    using Error::Error;
};

/// Bitmap contains no region-of-interest pixels.
struct EmptyRoiError : Error {
    using Error::Error;
};

/// An operation precondition was violated by the caller.
struct ContractViolation : Error {
    using Error::Error;
};

/// Bad parameter value (non-positive sigma, flux, ...).
struct ParameterError : Error {
    using Error::Error;
};

/// Window or index outside the valid region.
struct BoundsError : Error {
    using Error::Error;
};

/// Skill score undefined on a degenerate evaluation set.
struct UndefinedScoreError : Error {
    using Error::Error;
};

/// Malformed input file; message names the offending row/field.
struct ParseError : Error {
    using Error::Error;
};

/// File read/write failure with path context.
struct IoError : Error {
    using Error::Error;
};

}  // namespace flarebench
