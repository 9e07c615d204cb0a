#pragma once

#include <stdexcept>
#include <string>

namespace netfolio {

// Error families map onto the CLI exit codes:
//   ConfigError -> 2, DataError -> 3, SolverError -> 4.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad run configuration: window lengths, unknown strategy labels, out-of-range
// parameters supplied by the user.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Bad input data: CSV parse failures, non-positive prices, missing
// observations, degenerate (zero-variance) estimation windows.
class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(msg) {}
};

// An optimizer failed to meet its convergence contract.
class SolverError : public Error {
public:
    explicit SolverError(const std::string& msg) : Error(msg) {}
};

}  // namespace netfolio
