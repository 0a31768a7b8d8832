#pragma once

#include <stdexcept>

namespace confkern {

/// Malformed or inconsistent input: dimension mismatches, bad corpus files,
/// invalid embeddings. Maps to CLI exit code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numerical procedure could not complete: solver budget exhausted with the
/// KKT gap above tolerance, finite-difference instability. Maps to CLI exit
/// code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace confkern
