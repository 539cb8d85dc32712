#pragma once

#include <stdexcept>
#include <string>

namespace fzp {

// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Geometry violations: window larger than the padded input, size mismatches.
struct ShapeError : Error {
    using Error::Error;
};

// Malformed binary inputs (IDX, CIFAR batches, PGM/PPM files).
struct FormatError : Error {
    using Error::Error;
};

// Invalid configuration values (unknown operator name, non-positive r_max, ...).
struct ConfigError : Error {
    using Error::Error;
};

// Checkpoint file is valid but incompatible with the requested use.
struct CheckpointError : Error {
    using Error::Error;
};

// Fuzzy set selection failed: every score is zero (non-covering bank).
struct SelectionError : Error {
    using Error::Error;
};

// Missing or empty input data (empty corpus directory, empty prediction list).
struct InputError : Error {
    using Error::Error;
};

} // namespace fzp
