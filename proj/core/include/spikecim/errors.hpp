// SPDX-License-Identifier: Apache-2.0
//
// Exception hierarchy shared across the core library.  Every error carries a
// human-readable message; the CLI maps exception types to exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace spikecim {

// Configuration / description-file problems.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedPrecision : ConfigError {
    explicit UnsupportedPrecision(int weight_bits)
        : ConfigError("unsupported weight precision " + std::to_string(weight_bits) +
                      " (supported: 4, 6, 8)") {}
};

struct ParseError : ConfigError {
    using ConfigError::ConfigError;
};

struct ValidationError : ConfigError {
    using ConfigError::ConfigError;
};

// Runtime shape/state problems.
struct ShapeMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParityMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TileOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FanInExceedsCapacity : std::runtime_error {
    long fan_in;
    explicit FanInExceedsCapacity(long fan_in_, const std::string& context = "")
        : std::runtime_error("fan-in " + std::to_string(fan_in_) +
                             " exceeds core capacity 1152 (128 rows x 9 macros)" +
                             (context.empty() ? "" : "; " + context) +
                             "; split the layer along input channels"),
          fan_in(fan_in_) {}
};

struct CalibrationDiverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Event-file problems.
struct MalformedEvent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfBounds : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem / binary container problems.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace spikecim
