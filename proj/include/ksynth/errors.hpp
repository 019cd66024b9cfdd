#pragma once

#include <stdexcept>
#include <string>

namespace ksynth {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments / contract violations (CLI exit code 2).
struct ValidationError : Error {
    using Error::Error;
};
struct SizeMismatch : ValidationError {
    using ValidationError::ValidationError;
};
struct DfovMismatch : ValidationError {
    using ValidationError::ValidationError;
};
struct ShapeMismatch : ValidationError {
    using ValidationError::ValidationError;
};
struct TapeMismatch : ValidationError {
    using ValidationError::ValidationError;
};
struct BandOutOfRange : ValidationError {
    using ValidationError::ValidationError;
};

// Problems with input data / files (CLI exit code 3).
struct DataError : Error {
    using Error::Error;
};
struct IoError : DataError {
    using DataError::DataError;
};
struct NoPeak : DataError {
    using DataError::DataError;
};
struct RoiOutOfBounds : DataError {
    using DataError::DataError;
};
struct EmptyDataset : DataError {
    using DataError::DataError;
};

// Numerical failures (CLI exit code 4).
struct NumericError : Error {
    using Error::Error;
};
struct NonRealResult : NumericError {
    using NumericError::NumericError;
};
struct DivisionBlowup : NumericError {
    using NumericError::NumericError;
};
struct SingularSystem : NumericError {
    using NumericError::NumericError;
};
struct Divergence : NumericError {
    using NumericError::NumericError;
};

}  // namespace ksynth
