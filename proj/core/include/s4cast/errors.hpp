#pragma once

#include <stdexcept>
#include <string>

namespace s4cast {

// Error taxonomy mirrored by the CLI exit codes:
//   ConfigError -> 1, DataError -> 2, NumericError -> 3.

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration, flags, or schema mismatch.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input data, or a violated data precondition.
class DataError : public Error {
public:
    using Error::Error;
};

/// Numerical failure (non-convergence, singular systems).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what, long iterations = -1)
        : Error(what), iterations_(iterations) {}

    /// Iteration count at failure, or -1 when not applicable.
    long iterations() const noexcept { return iterations_; }

private:
    long iterations_;
};

}  // namespace s4cast
